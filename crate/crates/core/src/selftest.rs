//! The property suites behind `effectkit selftest`: every invariant of the
//! crate run over seeded random instances, with per-property sample counts,
//! failure counts and worst residuals.
//!
//! Each sample is a pure function of its seed, so suites shard across
//! threads through [`crate::batch`] with reproducible output.

use crate::algebra::is_strict_in_algebra;
use crate::batch;
use crate::bloch::{
    BlochPoint,
    construct_lambda, from_bloch, internal_couple_converse, verify_lambda_compat,
};
use crate::coexistence::{check_projection_meet, decompose_poc, is_partially_ortho_coexistent};
use crate::compatibility::{
    abs_compat_clause_residuals, compat_defect, is_abs_compatible, is_x0_compatible, shift_scale,
};
use crate::effects::Effect;
use crate::error::Result;
use crate::generators::{
    rand_abs_compat_strict_pair, rand_commuting_pair, rand_effect, rand_internal_couple,
    rand_mixed_abs_compat_pair, rand_ortho_triple, rand_projection, rand_strict_effect,
    rand_unitary, rand_x0_pair, Seed,
};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::structure::{recover_strict_pair_form, recover_x0_normal_form, six_block_recover, six_block_verification};
use crate::tol::ToleranceConfig;

/// Sample counts for one suite run. The `large` count drives the 500-sample
/// suites of the full run and `medium` the 200-sample ones.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: Seed,
    pub large: usize,
    pub medium: usize,
}

impl SuiteConfig {
    pub fn fast(seed: Seed) -> Self {
        SuiteConfig { seed, large: 48, medium: 24 }
    }

    pub fn full(seed: Seed) -> Self {
        SuiteConfig { seed, large: 500, medium: 200 }
    }
}

/// Outcome of one property suite.
#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub passed: bool,
}

/// Outcome of a full run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

struct Sample {
    ok: bool,
    residual: f64,
}

impl Sample {
    fn new(ok: bool, residual: f64) -> Self {
        Sample { ok, residual }
    }

    fn fail(residual: f64) -> Self {
        Sample { ok: false, residual }
    }
}

fn run_samples(
    name: &'static str,
    base: Seed,
    count: usize,
    f: impl Fn(Seed) -> Result<Sample> + Sync + Send,
) -> PropertyResult {
    let samples = batch::map_seeds(base, count, |s| match f(s) {
        Ok(sample) => sample,
        Err(_) => Sample::fail(f64::INFINITY),
    });
    let failures = samples.iter().filter(|s| !s.ok).count();
    let max_residual = samples.iter().fold(0.0_f64, |m, s| m.max(s.residual));
    PropertyResult { name, samples: count, failures, max_residual, passed: failures == 0 }
}

/// Names of every property, in execution order.
pub const PROPERTY_NAMES: [&str; 16] = [
    "linalg-functional-calculus",
    "effects-meet-join",
    "poc-uniqueness",
    "poc-complement-closure",
    "poc-commuting-sufficiency",
    "poc-meet-psd-equivalence",
    "projection-meet-commutation",
    "abs-compat-clause-suite",
    "abs-compat-symmetry",
    "abs-compat-self-complement",
    "x0-normal-form-round-trip",
    "x0-shift-scale-suite",
    "algebra-strictness-scaling",
    "strict-pair-two-block",
    "six-block-decomposition",
    "bloch-internal-couples",
];

/// Runs every suite and collects the per-property outcomes. The Bloch
/// converse check rides inside `bloch-internal-couples`.
pub fn run_suite(cfg: &SuiteConfig, tol: &ToleranceConfig) -> SuiteReport {
    let mut results = Vec::new();
    // Disjoint seed ranges per property.
    let stride: u64 = 1 << 24;
    let base = |i: u64| cfg.seed.wrapping_add(i.wrapping_mul(stride));

    results.push(prop_linalg(base(0), cfg.large, tol));
    results.push(prop_meet_join(base(1), cfg.large, tol));
    results.push(prop_poc_uniqueness(base(2), cfg.large, tol));
    results.push(prop_poc_complement(base(3), cfg.large, tol));
    results.push(prop_commuting(base(4), cfg.large, tol));
    results.push(prop_meet_psd_equivalence(base(5), cfg.large, tol));
    results.push(prop_projection_meet(base(6), cfg.large, tol));
    results.push(prop_clause_suite(base(7), cfg.large, tol));
    results.push(prop_abs_symmetry(base(8), cfg.medium, tol));
    results.push(prop_self_complement(base(9), cfg.medium, tol));
    results.push(prop_x0_round_trip(base(10), cfg.medium, tol));
    results.push(prop_shift_scale(base(11), cfg.medium, tol));
    results.push(prop_lemma_scaling(base(12), cfg.medium, tol));
    results.push(prop_strict_pair(base(13), cfg.medium, tol));
    results.push(prop_six_block(base(14), cfg.medium, tol));
    results.push(prop_bloch(base(15), cfg.large, cfg.medium, tol));
    SuiteReport { results }
}

fn dim_for(seed: Seed, lo: usize, hi: usize) -> usize {
    lo + (seed % (hi - lo + 1) as u64) as usize
}

fn prop_linalg(base: Seed, count: usize, _tol: &ToleranceConfig) -> PropertyResult {
    run_samples("linalg-functional-calculus", base, count, |seed| {
        let n = dim_for(seed, 1, 12);
        let e = rand_effect(n, seed);
        let h = &e.matrix().scale(2.0) - &HermitianMatrix::identity(n);
        let norm = h.op_norm()?.max(1.0);
        let nf = n as f64;

        let abs = h.abs_op()?;
        let r1 = (&HermitianMatrix::symmetrize(&abs * &abs)
            - &HermitianMatrix::symmetrize(&h * &h))
            .op_norm()?;
        let psd_ok = abs.is_psd(1e-10)?;

        let pos = h.pos_part()?;
        let neg = h.neg_part()?;
        let r2 = (&(&pos - &neg) - &h).op_norm()?;
        let r3 = (&pos * &neg).op_norm();

        let sq = HermitianMatrix::symmetrize(&h * &h);
        let r4 = (&sq.sqrt_psd(1e-8)?.func_calc(|x| x * x)? - &sq).op_norm()?;

        let eig = h.eig()?;
        let r5 = (&eig.reconstruct() - &h).op_norm()?;
        let r6 = eig.unitarity_residual();

        let residual = [r1 / (norm * norm), r2, r3 / norm, r4 / (norm * norm), r5 / norm, r6]
            .into_iter()
            .fold(0.0_f64, f64::max);
        Ok(Sample::new(psd_ok && residual <= 1e-8 * nf, residual))
    })
}

fn prop_meet_join(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("effects-meet-join", base, count, move |seed| {
        let n = dim_for(seed, 1, 8);
        let a = rand_effect(n, seed);
        let b = rand_effect(n, seed.wrapping_add(0x9e3779b9));
        let nf = n as f64;

        let meet = a.meet(&b)?;
        let join = a.join(&b)?;
        let r_sum = (&(&meet + &join) - &(a.matrix() + b.matrix())).op_norm()?;
        let r_sym = (&meet - &b.meet(&a)?).op_norm()?;

        // Order: meet <= a, b <= join.
        let slack = [
            (a.matrix() - &meet).min_eigenvalue()?,
            (b.matrix() - &meet).min_eigenvalue()?,
            (&join - a.matrix()).min_eigenvalue()?,
            (&join - b.matrix()).min_eigenvalue()?,
        ]
        .into_iter()
        .fold(0.0_f64, |m, s| m.max((-s).max(0.0)));

        // De Morgan shift.
        let dm = (&(&HermitianMatrix::identity(n) - &meet)
            - &a.complement().join(&b.complement())?)
            .op_norm()?;

        // Unitary covariance.
        let u = rand_unitary(n, seed.wrapping_add(0x517c_c1b7));
        let conj = |h: &HermitianMatrix| {
            HermitianMatrix::symmetrize(ComplexMatrix::from_inner(
                u.inner() * h.as_matrix().inner() * u.inner().adjoint(),
            ))
        };
        let ua = Effect::validate(conj(a.matrix()), &tol)?;
        let ub = Effect::validate(conj(b.matrix()), &tol)?;
        let cov = (&ua.meet(&ub)? - &conj(&meet)).op_norm()?;

        let residual = [r_sum, r_sym, slack, dm, cov].into_iter().fold(0.0_f64, f64::max);
        Ok(Sample::new(residual <= tol.psd_scaled(n, 1.0).max(1e-10 * nf), residual))
    })
}

fn prop_poc_uniqueness(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("poc-uniqueness", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        let inst = rand_ortho_triple(n, seed, &tol)?;
        let d = decompose_poc(&inst.a, &inst.b, &tol)?;
        let residual = [
            (d.x.matrix() - inst.x.matrix()).op_norm()?,
            (d.y.matrix() - inst.y.matrix()).op_norm()?,
            (d.z.matrix() - inst.z.matrix()).op_norm()?,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        Ok(Sample::new(residual <= 1e-8 * n as f64, residual))
    })
}

fn prop_poc_complement(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("poc-complement-closure", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        let (a, b) = if seed % 2 == 0 {
            let inst = rand_ortho_triple(n, seed, &tol)?;
            (inst.a, inst.b)
        } else {
            rand_commuting_pair(n, seed)
        };
        let (poc, _) = is_partially_ortho_coexistent(&a, &b, &tol)?;
        let (cpoc, _) = is_partially_ortho_coexistent(&a.complement(), &b.complement(), &tol)?;
        Ok(Sample::new(poc && cpoc, if poc && cpoc { 0.0 } else { 1.0 }))
    })
}

fn prop_commuting(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("poc-commuting-sufficiency", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        let (a, b) = rand_commuting_pair(n, seed);
        let meet_min = a.meet(&b)?.min_eigenvalue()?;
        let join_max =
            (&HermitianMatrix::identity(n) - &a.join(&b)?).min_eigenvalue()?;
        let residual = (-meet_min.min(join_max)).max(0.0);
        let (poc, _) = is_partially_ortho_coexistent(&a, &b, &tol)?;
        Ok(Sample::new(poc, residual))
    })
}

fn prop_meet_psd_equivalence(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("poc-meet-psd-equivalence", base, count, move |seed| {
        let n = dim_for(seed, 2, 6);
        if seed % 2 == 0 {
            // Forward: a PSD meet yields the orthogonal triple.
            let a = rand_effect(n, seed);
            let b = rand_effect(n, seed.wrapping_add(0x9e3779b9));
            let meet = a.meet(&b)?;
            if !meet.is_psd(tol.tau_psd)? {
                // Nothing to check in this direction.
                return Ok(Sample::new(true, 0.0));
            }
            let y = a.matrix() - &meet;
            let z = b.matrix() - &meet;
            let r_orth = (&y * &z).op_norm();
            let members = Effect::validate(y, &tol).is_ok() && Effect::validate(z, &tol).is_ok();
            Ok(Sample::new(members && r_orth <= tol.eq_scaled(n, 1.0), r_orth))
        } else {
            // Converse: a built triple with y z = 0 forces a PSD meet.
            let inst = rand_ortho_triple(n, seed, &tol)?;
            let meet = inst.a.meet(&inst.b)?;
            let min = meet.min_eigenvalue()?;
            let x_match = (&meet - inst.x.matrix()).op_norm()?;
            Ok(Sample::new(
                min >= -tol.psd_scaled(n, 1.0) && x_match <= 1e-8 * n as f64,
                x_match.max((-min).max(0.0)),
            ))
        }
    })
}

fn prop_projection_meet(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("projection-meet-commutation", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        let r1 = 1 + (seed / 7 % (n as u64 - 1)) as usize;
        let r2 = 1 + (seed / 11 % (n as u64 - 1)) as usize;
        let (p, q) = if seed % 4 == 0 {
            // Commuting pair: both diagonal in one random basis.
            let u = rand_unitary(n, seed);
            let conj = |h: &HermitianMatrix| {
                HermitianMatrix::symmetrize(ComplexMatrix::from_inner(
                    u.inner() * h.as_matrix().inner() * u.inner().adjoint(),
                ))
            };
            let d1: Vec<f64> = (0..n).map(|i| if i < r1 { 1.0 } else { 0.0 }).collect();
            let d2: Vec<f64> = (0..n).map(|i| if i % 2 == 0 && i < 2 * r2 { 1.0 } else { 0.0 }).collect();
            (
                crate::effects::Projection::validate(conj(&HermitianMatrix::diagonal(&d1)), &tol)?,
                crate::effects::Projection::validate(conj(&HermitianMatrix::diagonal(&d2)), &tol)?,
            )
        } else {
            (
                rand_projection(n, r1, seed.wrapping_add(1))?,
                rand_projection(n, r2, seed.wrapping_add(2))?,
            )
        };
        let report = check_projection_meet(&p, &q, &tol)?;
        let nf = n as f64;
        let psd_implies_commute = !report.meet_psd || report.commutator_norm <= 1e-8 * nf;
        let noncommute_implies_not_psd = report.commutator_norm <= 1e-3 || !report.meet_psd;
        Ok(Sample::new(
            psd_implies_commute && noncommute_implies_not_psd,
            if report.meet_psd { report.commutator_norm } else { 0.0 },
        ))
    })
}

fn prop_clause_suite(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("abs-compat-clause-suite", base, count, move |seed| {
        if seed % 2 == 0 {
            // Generated absolutely compatible pair: all clauses hold.
            let k = 1 + (seed / 2 % 4) as usize;
            let (a, b, _) = rand_abs_compat_strict_pair(k, seed, &tol)?;
            let rs = abs_compat_clause_residuals(&a, &b)?;
            let bound = 1e-8 * (2 * k) as f64;
            let max = rs.into_iter().fold(0.0_f64, f64::max);
            Ok(Sample::new(max <= bound, max))
        } else {
            // Random generic pair: the clauses agree, resampling anything
            // inside the tolerance band.
            let mut attempt = seed;
            for _ in 0..64 {
                let n = dim_for(attempt, 2, 6);
                let a = rand_effect(n, attempt);
                let b = rand_effect(n, attempt.wrapping_add(0x9e3779b9));
                let rs = abs_compat_clause_residuals(&a, &b)?;
                let lo = 1e-8 * n as f64;
                let hi = 1e-5 * n as f64;
                if rs.iter().any(|&r| r > lo && r < hi) {
                    attempt = attempt.wrapping_add(0x517c_c1b7);
                    continue;
                }
                let verdicts: Vec<bool> = rs.iter().map(|&r| r <= lo).collect();
                let agree = verdicts.iter().all(|&v| v == verdicts[0]);
                let spread = rs.iter().fold(0.0_f64, |m, &r| m.max(r))
                    - rs.iter().fold(f64::INFINITY, |m, &r| m.min(r));
                return Ok(Sample::new(agree, if agree { 0.0 } else { spread }));
            }
            // Band-straddling 64 times in a row: treat as a failure.
            Ok(Sample::fail(f64::INFINITY))
        }
    })
}

fn prop_abs_symmetry(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("abs-compat-symmetry", base, count, move |seed| {
        let k = 1 + (seed % 4) as usize;
        let (a, b, _) = rand_abs_compat_strict_pair(k, seed, &tol)?;
        let flipped = is_abs_compatible(&b, &a, &tol)?;
        let combos = [
            is_abs_compatible(&a.complement(), &b, &tol)?,
            is_abs_compatible(&a, &b.complement(), &tol)?,
            is_abs_compatible(&a.complement(), &b.complement(), &tol)?,
        ];
        let r = (&compat_defect(&a, &b)? - &compat_defect(&b, &a)?).op_norm()?;
        Ok(Sample::new(flipped && combos.iter().all(|&c| c) && r <= 1e-12, r))
    })
}

fn prop_self_complement(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("abs-compat-self-complement", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        if seed % 2 == 0 {
            let rank = 1 + (seed / 2 % (n as u64 - 1)) as usize;
            let p = rand_projection(n, rank, seed)?;
            let e = p.effect().clone();
            let ok = is_abs_compatible(&e, &e.complement(), &tol)?;
            let r = compat_defect(&e, &e.complement())?.op_norm()?;
            Ok(Sample::new(ok, r))
        } else {
            let e = rand_strict_effect(n, seed);
            let ok = !is_abs_compatible(&e, &e.complement(), &tol)?;
            let r = compat_defect(&e, &e.complement())?.op_norm()?;
            Ok(Sample::new(ok, if ok { 0.0 } else { r }))
        }
    })
}

fn prop_x0_round_trip(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("x0-normal-form-round-trip", base, count, move |seed| {
        let k = 1 + (seed % 4) as usize;
        let n = 2 * k;
        let (a, b, form) = rand_x0_pair(k, seed, &tol)?;
        let rec = recover_x0_normal_form(&a, &b, &tol)?;
        let reassembly = rec.max_residual(&a, &b)?;
        let defect_match = (&rec.x0 - &form.x0).op_norm()?;
        let params = [
            (&rec.w1 - &form.w1).op_norm()?,
            (&rec.w2 - &form.w2).op_norm()?,
            (rec.p.matrix() - form.p.matrix()).op_norm()?,
            (rec.q.matrix() - form.q.matrix()).op_norm()?,
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        let ok = reassembly <= 1e-8 * n as f64 && defect_match <= 1e-9 && params <= 1e-7 * n as f64;
        Ok(Sample::new(ok, reassembly.max(defect_match).max(params)))
    })
}

fn prop_shift_scale(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("x0-shift-scale-suite", base, count, move |seed| {
        let k = 1 + (seed % 4) as usize;
        let n = 2 * k;
        let (a, b, form) = rand_x0_pair(k, seed, &tol)?;
        let x0 = &form.x0;
        let id = HermitianMatrix::identity(n);
        let lower = x0.scale(0.5);

        // Prop 3.5(1): a, b within [x0/2, I - x0/2].
        let mut slack = 0.0_f64;
        for e in [&a, &b] {
            slack = slack.max((-(e.matrix() - &lower).min_eigenvalue()?).max(0.0));
            slack = slack.max((-(&(&id - &lower) - e.matrix()).min_eigenvalue()?).max(0.0));
        }
        // Prop 3.5(3): the meet and join obey the same bounds.
        let meet = a.meet(&b)?;
        let join = a.join(&b)?;
        slack = slack.max((-(&meet - &lower).min_eigenvalue()?).max(0.0));
        slack = slack.max((-(&(&id - &lower) - &join).min_eigenvalue()?).max(0.0));

        // Prop 3.5(2): the shifted pair is absolutely compatible.
        let sa = shift_scale(&a, x0, &tol)?;
        let sb = shift_scale(&b, x0, &tol)?;
        let shifted_defect = compat_defect(&sa, &sb)?.op_norm()?;

        let report = is_x0_compatible(&a, &b, &tol)?;
        let ok = slack <= 1e-8 && shifted_defect <= 1e-8 * n as f64 && report.x0_compatible && report.poc;
        Ok(Sample::new(ok, slack.max(shifted_defect)))
    })
}

fn prop_lemma_scaling(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("algebra-strictness-scaling", base, count, move |seed| {
        let n = dim_for(seed, 2, 8);
        let product = |lhs: &HermitianMatrix, rhs: &HermitianMatrix| -> Result<Effect> {
            Effect::validate(HermitianMatrix::symmetrize(lhs * rhs), &tol)
        };
        if seed % 2 == 0 {
            // Strict v, commuting x = g(v) with ‖x‖ < 1: both scaled factors
            // stay strict.
            let v = rand_strict_effect(n, seed);
            let x = v.matrix().func_calc(|l| 0.9 * (0.2 + 0.6 * l))?;
            let one_minus_x = &HermitianMatrix::identity(n) - &x;
            let s1 = product(&one_minus_x, v.matrix())?;
            let s2 = product(&one_minus_x, v.complement().matrix())?;
            let ok = is_strict_in_algebra(&s1, &tol) && is_strict_in_algebra(&s2, &tol);
            Ok(Sample::new(ok, if ok { 0.0 } else { 1.0 }))
        } else {
            // Non-strict v: at least one scaled factor goes non-strict.
            let rank = 1 + (seed / 2 % (n as u64 - 1)) as usize;
            let v = rand_projection(n, rank, seed)?.effect().clone();
            let x = v.matrix().func_calc(|l| 0.9 * (0.2 + 0.6 * l))?;
            let one_minus_x = &HermitianMatrix::identity(n) - &x;
            let s1 = product(&one_minus_x, v.matrix())?;
            let s2 = product(&one_minus_x, v.complement().matrix())?;
            let ok = !is_strict_in_algebra(&s1, &tol) || !is_strict_in_algebra(&s2, &tol);
            Ok(Sample::new(ok, if ok { 0.0 } else { 1.0 }))
        }
    })
}

fn prop_strict_pair(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("strict-pair-two-block", base, count, move |seed| {
        let k = 1 + (seed % 3) as usize;
        let n = 2 * k;
        let (a, b, _) = rand_abs_compat_strict_pair(k, seed, &tol)?;
        let form = recover_strict_pair_form(&a, &b, &tol)?;
        let residual = form.max_residual(&a, &b)?;
        let sum = &HermitianMatrix::symmetrize(form.a0.matrix() * form.a0.matrix())
            + &HermitianMatrix::symmetrize(form.b0.matrix() * form.b0.matrix());
        let sum_eff = Effect::validate(sum, &tol)?;
        let ok = residual <= 1e-7 * n as f64 && sum_eff.is_strict(&tol);
        Ok(Sample::new(ok, residual))
    })
}

fn prop_six_block(base: Seed, count: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    run_samples("six-block-decomposition", base, count, move |seed| {
        let (a, b) = rand_mixed_abs_compat_pair(seed, &tol)?;
        let d = six_block_recover(&a, &b, &tol)?;
        let v = six_block_verification(&a, &b, &d, &tol)?;
        let ok = v.passed && v.max_residual() <= 1e-7 * a.dim() as f64;
        Ok(Sample::new(ok, v.max_residual()))
    })
}

fn prop_bloch(base: Seed, large: usize, medium: usize, tol: &ToleranceConfig) -> PropertyResult {
    let tol = *tol;
    let end_to_end = run_samples("bloch-internal-couples", base, large, move |seed| {
        let (pa, pb) = rand_internal_couple(seed);
        let cons = construct_lambda(pa, pb, &tol)?;
        let (ok, ver) = verify_lambda_compat(&cons, &tol)?;
        let perp1 = {
            let d1 = (cons.a1.x - cons.m0.x, cons.a1.y - cons.m0.y, cons.a1.z - cons.m0.z);
            let d2 = (cons.b1.x - cons.m0.x, cons.b1.y - cons.m0.y, cons.b1.z - cons.m0.z);
            (d1.0 * d2.0 + d1.1 * d2.1 + d1.2 * d2.2).abs()
        };
        let perp2 = {
            let e1 = (cons.q.x - cons.p.x, cons.q.y - cons.p.y, cons.q.z - cons.p.z);
            let e2 = (cons.q_prime.x - cons.p.x, cons.q_prime.y - cons.p.y, cons.q_prime.z - cons.p.z);
            (e1.0 * e2.0 + e1.1 * e2.1 + e1.2 * e2.2).abs()
        };
        let lambda_ok = (0.0..1.0).contains(&cons.lambda);
        let residual = ver.max_residual().max(perp1).max(perp2);
        Ok(Sample::new(ok && lambda_ok && perp1 <= 1e-9 && perp2 <= 1e-9, residual))
    });
    if !end_to_end.passed {
        return end_to_end;
    }

    // Converse direction on λ-compatible pairs assembled two different ways.
    let converse = run_samples(
        "bloch-internal-couples",
        base.wrapping_add(1 << 20),
        medium,
        move |seed| {
            let (a, b) = if seed % 2 == 0 {
                let (pa, pb) = rand_internal_couple(seed);
                let cons = construct_lambda(pa, pb, &tol)?;
                let assemble = |last: BlochPoint| -> Result<Effect> {
                    let m = &(&HermitianMatrix::identity(2).scale(0.5 * cons.lambda)
                        + &from_bloch(cons.p).scale(cons.mu1))
                        + &from_bloch(last).scale(cons.mu2);
                    Effect::validate(m, &tol)
                };
                (assemble(cons.q)?, assemble(cons.q_prime)?)
            } else {
                let mut attempt = seed;
                loop {
                    let (a, b, form) = rand_x0_pair(1, attempt, &tol)?;
                    if form.x0.trace() / 2.0 >= 1e-3 {
                        break (a, b);
                    }
                    attempt = attempt.wrapping_add(0x9e37_79b9);
                }
            };
            let ok = internal_couple_converse(&a, &b, &tol)?;
            Ok(Sample::new(ok, if ok { 0.0 } else { 1.0 }))
        },
    );

    PropertyResult {
        name: "bloch-internal-couples",
        samples: end_to_end.samples + converse.samples,
        failures: end_to_end.failures + converse.failures,
        max_residual: end_to_end.max_residual.max(converse.max_residual),
        passed: end_to_end.passed && converse.passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let cfg = SuiteConfig::fast(0xEFFEC7);
        let tol = ToleranceConfig::default();
        let report = run_suite(&cfg, &tol);
        for r in &report.results {
            assert!(
                r.passed,
                "property {} failed: {}/{} failures, max residual {:.3e}",
                r.name, r.failures, r.samples, r.max_residual
            );
        }
        assert!(report.passed());
    }

    #[test]
    fn zero_equality_tolerance_breaks_suites() {
        let cfg = SuiteConfig { seed: 1, large: 8, medium: 4 };
        let tol = ToleranceConfig { tau_eq: 0.0, ..Default::default() };
        let report = run_suite(&cfg, &tol);
        assert!(!report.passed());
    }

    #[test]
    fn suite_is_deterministic() {
        let cfg = SuiteConfig { seed: 7, large: 6, medium: 3 };
        let tol = ToleranceConfig::default();
        let a = run_suite(&cfg, &tol);
        let b = run_suite(&cfg, &tol);
        for (x, y) in a.results.iter().zip(&b.results) {
            assert_eq!(x.failures, y.failures);
            assert_eq!(x.max_residual.to_bits(), y.max_residual.to_bits());
        }
    }
}
