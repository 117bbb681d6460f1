//! Batch front end for the effect-algebra toolkit.
//!
//! Subcommands: `check` (classification report), `decompose` (normal forms),
//! `bloch` (qubit geometry and Figure-style plots), `generate` (seeded pair
//! files) and `selftest` (the property suites).
//!
//! Exit codes are a stable contract: 0 analysis-ok, 1 selftest failure,
//! 2 parse error, 3 invalid effect, 4 precondition not satisfied, 5 wrong
//! shape for Bloch input.

mod exit;
mod io;
mod report;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use effectkit::bloch::{self, BlochPoint};
use effectkit::coexistence::decompose_poc;
use effectkit::compatibility::abs_compat_partition;
use effectkit::generators::{self, Seed};
use effectkit::selftest::{run_suite, SuiteConfig};
use effectkit::structure::{
    recover_strict_pair_form, recover_x0_normal_form, six_block_recover, six_block_verification,
};
use effectkit::{Effect, ToleranceConfig};

use exit::{CliError, PARSE_ERROR, SELFTEST_FAILURE, SHAPE};
use io::{emit, load_pair, read_json, LoadedPair, PairFile};

const DEFAULT_SEED: Seed = 0xEFFEC7;

#[derive(Parser)]
#[command(name = "effectkit", version, about = "Compatibility relations of Hilbert-space effect pairs")]
struct Cli {
    /// Worker threads for batch commands (defaults to the rayon pool size).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pair file: commutation, coexistence witnesses, partial
    /// ortho-coexistence, absolute and x0-compatibility.
    Check {
        input: PathBuf,
        /// Optional coexistence witness file to verify against the pair.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Also write the report to a file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a decomposition of the pair in the requested normal form.
    Decompose {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify qubit states on the Bloch ball and run the internal-couple
    /// construction, optionally emitting SVG and CSV plots.
    Bloch {
        /// Pair file with 2x2 trace-one matrices.
        input: Option<PathBuf>,
        /// Raw points instead of a file: "x,y,z;x,y,z".
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write seeded pair files of a requested class.
    Generate {
        #[arg(long = "class", value_enum)]
        class: GenClass,
        /// Ambient dimension for effect/projection/commuting classes.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Block count for abs-strict and x0 classes (ambient dim = 2k).
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Projection rank (defaults to dim/2 rounded up).
        #[arg(long)]
        rank: Option<usize>,
        /// Base seed; EFFECTKIT_SEED overrides the default when unset.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory for the generated files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Explicit output path (count must be 1).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites and print one row per property.
    Selftest {
        #[arg(long, value_enum, default_value_t = Suite::Fast)]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Poc,
    Abs,
    X0,
    SixBlock,
    StrictPair,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenClass {
    Effect,
    Projection,
    Commuting,
    AbsStrict,
    X0,
    InternalCouple,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Fast,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli.jobs;

    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn env_seed() -> Seed {
    std::env::var("EFFECTKIT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check { input, witness, out } => {
            let LoadedPair { a, b, tol } = load_pair(&input)?;
            let w = match witness {
                None => None,
                Some(path) => {
                    let raw: io::WitnessFile = read_json(&path)?;
                    Some(report::witness_from_file(&raw, &tol)?)
                }
            };
            let rep = report::check_report(&a, &b, w.as_ref(), &tol)?;
            emit(&rep, out.as_deref())?;
            Ok(0)
        }
        Command::Decompose { input, mode, out } => {
            let LoadedPair { a, b, tol } = load_pair(&input)?;
            let rep = decompose(&a, &b, mode, &tol).map_err(CliError::precondition)?;
            emit(&rep, out.as_deref())?;
            Ok(0)
        }
        Command::Bloch { input, points, svg, csv, out } => cmd_bloch(input, points, svg, csv, out),
        Command::Generate { class, dim, k, rank, seed, count, out_dir, out } => {
            cmd_generate(class, dim, k, rank, seed.unwrap_or_else(env_seed), count, out_dir, out)
        }
        Command::Selftest { suite, seed } => {
            let cfg = match suite {
                Suite::Fast => SuiteConfig::fast(seed.unwrap_or_else(env_seed)),
                Suite::Full => SuiteConfig::full(seed.unwrap_or_else(env_seed)),
            };
            let started = Instant::now();
            let report = run_suite(&cfg, &ToleranceConfig::default());
            println!("{:<32} {:>8} {:>9} {:>14}  status", "property", "samples", "failures", "max residual");
            for r in &report.results {
                println!(
                    "{:<32} {:>8} {:>9} {:>14.3e}  {}",
                    r.name,
                    r.samples,
                    r.failures,
                    r.max_residual,
                    if r.passed { "PASS" } else { "FAIL" }
                );
            }
            let verdict = if report.passed() { "PASS" } else { "FAIL" };
            println!(
                "suite: {verdict} ({} properties, {:.1} s, seed {})",
                report.results.len(),
                started.elapsed().as_secs_f64(),
                cfg.seed
            );
            Ok(if report.passed() { 0 } else { SELFTEST_FAILURE })
        }
    }
}

fn decompose(
    a: &Effect,
    b: &Effect,
    mode: Mode,
    tol: &ToleranceConfig,
) -> effectkit::Result<report::DecomposeReport> {
    match mode {
        Mode::Poc => {
            let d = decompose_poc(a, b, tol)?;
            report::poc_report(a, b, &d)
        }
        Mode::Abs => {
            let p = abs_compat_partition(a, b, tol)?;
            report::abs_report(&p)
        }
        Mode::X0 => {
            let form = recover_x0_normal_form(a, b, tol)?;
            report::x0_report(a, b, &form, tol)
        }
        Mode::SixBlock => {
            let d = six_block_recover(a, b, tol)?;
            let v = six_block_verification(a, b, &d, tol)?;
            Ok(report::six_block_report(&d, &v, a.dim()))
        }
        Mode::StrictPair => {
            let form = recover_strict_pair_form(a, b, tol)?;
            report::strict_pair_report(a, b, &form)
        }
    }
}

fn parse_points(raw: &str) -> Result<Vec<BlochPoint>, CliError> {
    raw.split(';')
        .filter(|chunk| !chunk.trim().is_empty())
        .map(|chunk| {
            let coords: Vec<f64> = chunk
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::new(PARSE_ERROR, format!("bad point '{chunk}': {e}")))?;
            if coords.len() != 3 {
                return Err(CliError::new(
                    PARSE_ERROR,
                    format!("point '{chunk}' needs exactly three coordinates"),
                ));
            }
            Ok(BlochPoint::new(coords[0], coords[1], coords[2]))
        })
        .collect()
}

fn cmd_bloch(
    input: Option<PathBuf>,
    points: Option<String>,
    svg: Option<PathBuf>,
    csv: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<u8, CliError> {
    let tol = ToleranceConfig::default();
    let (pts, names): (Vec<BlochPoint>, Vec<String>) = match (&input, &points) {
        (Some(path), None) => {
            let pf: PairFile = read_json(path)?;
            if pf.dim != 2 {
                return Err(CliError::new(
                    SHAPE,
                    format!("bloch expects 2x2 matrices, got dim {}", pf.dim),
                ));
            }
            let tol_file = pf.tolerances.clone().unwrap_or_default().to_config()?;
            let a = io::effect_from_json(&pf.a, 2, &tol_file, "a")?;
            let b = io::effect_from_json(&pf.b, 2, &tol_file, "b")?;
            let pa = bloch::to_bloch(a.matrix(), &tol_file).map_err(CliError::bloch)?;
            let pb = bloch::to_bloch(b.matrix(), &tol_file).map_err(CliError::bloch)?;
            (vec![pa, pb], vec!["A".into(), "B".into()])
        }
        (None, Some(raw)) => {
            let pts = parse_points(raw)?;
            let names = (0..pts.len()).map(|i| format!("P{}", i + 1)).collect();
            (pts, names)
        }
        _ => {
            return Err(CliError::new(
                PARSE_ERROR,
                "bloch needs exactly one of an input file or --points",
            ))
        }
    };

    let point_reports: Vec<report::PointReport> = names
        .iter()
        .zip(&pts)
        .map(|(name, &pt)| report::point_report(name, pt, &tol))
        .collect();

    let mut internal_couple = None;
    let mut construction = None;
    let mut cons_value = None;
    if pts.len() == 2 {
        match bloch::is_internal_couple(pts[0], pts[1], &tol) {
            Ok(is_internal) => {
                let m = BlochPoint::new(
                    0.5 * (pts[0].x + pts[1].x),
                    0.5 * (pts[0].y + pts[1].y),
                    0.5 * (pts[0].z + pts[1].z),
                );
                let slack = m.dist(bloch::CENTRE) + 0.5 * pts[0].dist(pts[1]) - bloch::RADIUS;
                internal_couple = Some(report::Flag { value: is_internal, residual: slack });
                if is_internal {
                    let cons =
                        bloch::construct_lambda(pts[0], pts[1], &tol).map_err(CliError::bloch)?;
                    let (ok, ver) =
                        bloch::verify_lambda_compat(&cons, &tol).map_err(CliError::bloch)?;
                    construction = Some(report::construction_report(&cons, ok, &ver, &tol));
                    cons_value = Some(cons);
                }
            }
            Err(effectkit::Error::DegenerateCouple) => {
                internal_couple = Some(report::Flag { value: false, residual: 0.0 });
            }
            Err(e) => return Err(CliError::bloch(e)),
        }
    }

    let rep = report::BlochReport { points: point_reports, internal_couple, construction };
    emit(&rep, out.as_deref())?;

    let named: Vec<(String, BlochPoint)> = match &cons_value {
        Some(cons) => cons
            .named_points()
            .into_iter()
            .map(|(n, p)| (n.to_string(), p))
            .collect(),
        None => names.iter().cloned().zip(pts.iter().copied()).collect(),
    };
    if let Some(path) = svg {
        let scene = match &cons_value {
            Some(cons) => render::svg_construction(cons),
            None => render::svg_points(&named),
        };
        std::fs::write(&path, scene)
            .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = csv {
        std::fs::write(&path, render::csv_points(&named))
            .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    class: GenClass,
    dim: usize,
    k: usize,
    rank: Option<usize>,
    seed: Seed,
    count: usize,
    out_dir: PathBuf,
    out: Option<PathBuf>,
) -> Result<u8, CliError> {
    if out.is_some() && count != 1 {
        return Err(CliError::new(PARSE_ERROR, "--out requires --count 1"));
    }
    if dim == 0 {
        return Err(CliError::new(PARSE_ERROR, "--dim must be at least 1"));
    }
    let tol = ToleranceConfig::default();
    let class_name = match class {
        GenClass::Effect => "effect",
        GenClass::Projection => "projection",
        GenClass::Commuting => "commuting",
        GenClass::AbsStrict => "abs-strict",
        GenClass::X0 => "x0",
        GenClass::InternalCouple => "internal-couple",
    };

    for i in 0..count {
        let s = seed.wrapping_add(i as u64);
        let (a, b, n) = match class {
            GenClass::Effect => {
                let e = generators::rand_effect(dim, s);
                (e.clone(), e, dim)
            }
            GenClass::Projection => {
                let r = rank.unwrap_or(dim.div_ceil(2));
                let p = generators::rand_projection(dim, r, s)
                    .map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))?;
                (p.effect().clone(), p.effect().clone(), dim)
            }
            GenClass::Commuting => {
                let (a, b) = generators::rand_commuting_pair(dim, s);
                (a, b, dim)
            }
            GenClass::AbsStrict => {
                let (a, b, _) = generators::rand_abs_compat_strict_pair(k, s, &tol)
                    .map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))?;
                (a, b, 2 * k)
            }
            GenClass::X0 => {
                let (a, b, _) = generators::rand_x0_pair(k, s, &tol)
                    .map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))?;
                (a, b, 2 * k)
            }
            GenClass::InternalCouple => {
                let (pa, pb) = generators::rand_internal_couple(s);
                let a = Effect::validate(bloch::from_bloch(pa), &tol)
                    .map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))?;
                let b = Effect::validate(bloch::from_bloch(pb), &tol)
                    .map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))?;
                (a, b, 2)
            }
        };
        let pf = PairFile {
            dim: n,
            a: io::matrix_to_json(a.matrix()),
            b: io::matrix_to_json(b.matrix()),
            tolerances: None,
        };
        let path = match &out {
            Some(p) => p.clone(),
            None => out_dir.join(format!("{class_name}-seed{s}-{i:03}.json")),
        };
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", parent.display())))?;
            }
        }
        std::fs::write(&path, io::to_pretty_json(&pf))
            .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(0)
}
