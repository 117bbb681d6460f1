//! Report payloads. Every boolean travels with the residual that decided it.

use serde::Serialize;

use effectkit::algebra::centrality_residual;
use effectkit::bloch::{
    BlochPoint, InternalCoupleConstruction, LambdaVerification, PointClass,
};
use effectkit::coexistence::{CoexistenceWitness, OrthoDecomposition};
use effectkit::compatibility::{AbsCompatPartition, CompatibilityReport};
use effectkit::linalg::HermitianMatrix;
use effectkit::structure::{
    SixBlockDecomposition, SixBlockVerification, StrictPairNormalForm, X0NormalForm,
};
use effectkit::{Effect, Result, ToleranceConfig};

use crate::io::{matrix_to_json, MatrixJson};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Flag {
    pub value: bool,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub dim: usize,
    pub commute: Flag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_valid: Option<Flag>,
    pub partially_ortho_coexistent: Flag,
    pub abs_compatible: Flag,
    pub x0_compatible: Flag,
    pub defect_psd: Flag,
    pub defect_central: Flag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub defect_norm: f64,
    pub defect: MatrixJson,
}

/// Assembles the full classification, recomputing residuals so that every
/// flag in the report is auditable.
pub fn check_report(
    a: &Effect,
    b: &Effect,
    witness: Option<&CoexistenceWitness>,
    tol: &ToleranceConfig,
) -> Result<CheckReport> {
    let n = a.dim();
    let r: CompatibilityReport = effectkit::compatibility::is_x0_compatible(a, b, tol)?;

    let meet = a.meet(b)?;
    let join = a.join(b)?;
    let poc_violation = (-meet
        .min_eigenvalue()?
        .min((&HermitianMatrix::identity(n) - &join).min_eigenvalue()?))
    .max(0.0);

    let defect_min = r.defect.min_eigenvalue()?;
    let central_res = centrality_residual(&r.defect, a, b, tol)?;
    let x0_residual = (-defect_min)
        .max(0.0)
        .max((r.defect_norm - (1.0 - tol.tau_strict)).max(0.0))
        .max(if r.defect_central { 0.0 } else { central_res });

    let witness_valid = match witness {
        None => None,
        Some(w) => {
            let ok = effectkit::coexistence::verify_coexistence_witness(a, b, w, tol)?;
            let rx = (&(w.x.matrix() + w.y.matrix()) - a.matrix()).op_norm()?;
            let rz = (&(w.x.matrix() + w.z.matrix()) - b.matrix()).op_norm()?;
            let d = w.d();
            let sum_violation = (-(&HermitianMatrix::identity(n) - &d).min_eigenvalue()?)
                .max(-d.min_eigenvalue()?)
                .max(0.0);
            Some(Flag { value: ok, residual: rx.max(rz).max(sum_violation) })
        }
    };

    Ok(CheckReport {
        dim: n,
        commute: Flag { value: r.commute, residual: r.commutator_norm },
        witness_valid,
        partially_ortho_coexistent: Flag { value: r.poc, residual: poc_violation },
        abs_compatible: Flag { value: r.abs_compatible, residual: r.defect_norm },
        x0_compatible: Flag { value: r.x0_compatible, residual: x0_residual },
        defect_psd: Flag { value: r.defect_psd, residual: (-defect_min).max(0.0) },
        defect_central: Flag { value: r.defect_central, residual: central_res },
        lambda: r.lambda,
        defect_norm: r.defect_norm,
        defect: matrix_to_json(&r.defect),
    })
}

#[derive(Debug, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum DecomposeReport {
    Poc {
        dim: usize,
        x: MatrixJson,
        y: MatrixJson,
        z: MatrixJson,
        join: MatrixJson,
        residual_reassembly: f64,
        residual_orthogonality: f64,
    },
    Abs {
        dim: usize,
        x: MatrixJson,
        y: MatrixJson,
        z: MatrixJson,
        w: MatrixJson,
        residual_partition: f64,
        residual_yz: f64,
        residual_xw: f64,
    },
    X0 {
        dim: usize,
        x0: MatrixJson,
        w1: MatrixJson,
        w2: MatrixJson,
        p: MatrixJson,
        q: MatrixJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
        residual_reassembly: f64,
    },
    SixBlock {
        dim: usize,
        ranks: [usize; 6],
        projections: Vec<MatrixJson>,
        passed: bool,
        residuals: Vec<NamedResidual>,
    },
    StrictPair {
        dim: usize,
        block_dim: usize,
        a0: MatrixJson,
        b0: MatrixJson,
        basis_unitary: MatrixJson,
        residual_reassembly: f64,
    },
}

#[derive(Debug, Serialize)]
pub struct NamedResidual {
    pub check: String,
    pub residual: f64,
}

pub fn poc_report(a: &Effect, b: &Effect, d: &OrthoDecomposition) -> Result<DecomposeReport> {
    let sum = &(d.x.matrix() + d.y.matrix()) + d.z.matrix();
    let residual_reassembly = [
        (&(d.x.matrix() + d.y.matrix()) - a.matrix()).op_norm()?,
        (&(d.x.matrix() + d.z.matrix()) - b.matrix()).op_norm()?,
        (&sum - d.join.matrix()).op_norm()?,
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);
    Ok(DecomposeReport::Poc {
        dim: a.dim(),
        x: matrix_to_json(d.x.matrix()),
        y: matrix_to_json(d.y.matrix()),
        z: matrix_to_json(d.z.matrix()),
        join: matrix_to_json(d.join.matrix()),
        residual_reassembly,
        residual_orthogonality: (d.y.matrix() * d.z.matrix()).op_norm(),
    })
}

pub fn abs_report(p: &AbsCompatPartition) -> Result<DecomposeReport> {
    let n = p.x.dim();
    let sum = &(&(p.x.matrix() + p.y.matrix()) + p.z.matrix()) + p.w.matrix();
    Ok(DecomposeReport::Abs {
        dim: n,
        x: matrix_to_json(p.x.matrix()),
        y: matrix_to_json(p.y.matrix()),
        z: matrix_to_json(p.z.matrix()),
        w: matrix_to_json(p.w.matrix()),
        residual_partition: (&sum - &HermitianMatrix::identity(n)).op_norm()?,
        residual_yz: (p.y.matrix() * p.z.matrix()).op_norm(),
        residual_xw: (p.x.matrix() * p.w.matrix()).op_norm(),
    })
}

pub fn x0_report(a: &Effect, b: &Effect, form: &X0NormalForm, tol: &ToleranceConfig) -> Result<DecomposeReport> {
    let report = effectkit::compatibility::is_x0_compatible(a, b, tol)?;
    Ok(DecomposeReport::X0 {
        dim: a.dim(),
        x0: matrix_to_json(&form.x0),
        w1: matrix_to_json(&form.w1),
        w2: matrix_to_json(&form.w2),
        p: matrix_to_json(form.p.matrix()),
        q: matrix_to_json(form.q.matrix()),
        lambda: report.lambda,
        residual_reassembly: form.max_residual(a, b)?,
    })
}

pub fn six_block_report(
    d: &SixBlockDecomposition,
    v: &SixBlockVerification,
    dim: usize,
) -> DecomposeReport {
    DecomposeReport::SixBlock {
        dim,
        ranks: std::array::from_fn(|i| d.projections[i].rank()),
        projections: d.projections.iter().map(|p| matrix_to_json(p.matrix())).collect(),
        passed: v.passed,
        residuals: v
            .checks
            .iter()
            .map(|(check, residual)| NamedResidual { check: check.clone(), residual: *residual })
            .collect(),
    }
}

pub fn strict_pair_report(
    a: &Effect,
    b: &Effect,
    form: &StrictPairNormalForm,
) -> Result<DecomposeReport> {
    let u = form.basis_unitary.clone();
    let n = u.dim();
    let unitary_json: MatrixJson = (0..n)
        .map(|i| (0..n).map(|j| [u.entry(i, j).re, u.entry(i, j).im]).collect())
        .collect();
    Ok(DecomposeReport::StrictPair {
        dim: a.dim(),
        block_dim: form.block_dim,
        a0: matrix_to_json(form.a0.matrix()),
        b0: matrix_to_json(form.b0.matrix()),
        basis_unitary: unitary_json,
        residual_reassembly: form.max_residual(a, b)?,
    })
}

#[derive(Debug, Serialize)]
pub struct PointReport {
    pub name: String,
    pub coords: [f64; 3],
    pub class: String,
    pub det: f64,
}

#[derive(Debug, Serialize)]
pub struct BlochReport {
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal_couple: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionReport>,
}

#[derive(Debug, Serialize)]
pub struct ConstructionReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub points: Vec<PointReport>,
    pub verified: bool,
    pub residual_abs_diff: f64,
    pub residual_abs_co: f64,
    pub residual_eq_a: f64,
    pub residual_eq_b: f64,
    pub residual_defect: f64,
}

pub fn class_name(c: PointClass) -> &'static str {
    match c {
        PointClass::OnSphere => "on_sphere",
        PointClass::InS => "in_S",
        PointClass::Outside => "outside",
        PointClass::Centre => "centre",
    }
}

pub fn point_report(name: &str, pt: BlochPoint, tol: &ToleranceConfig) -> PointReport {
    PointReport {
        name: name.to_string(),
        coords: [pt.x, pt.y, pt.z],
        class: class_name(effectkit::bloch::classify_point(pt, tol)).to_string(),
        det: effectkit::bloch::bloch_det(pt),
    }
}

pub fn construction_report(
    cons: &InternalCoupleConstruction,
    verified: bool,
    ver: &LambdaVerification,
    tol: &ToleranceConfig,
) -> ConstructionReport {
    ConstructionReport {
        alpha: cons.alpha,
        beta: cons.beta,
        gamma: cons.gamma,
        lambda: cons.lambda,
        mu1: cons.mu1,
        mu2: cons.mu2,
        points: cons
            .named_points()
            .into_iter()
            .map(|(name, pt)| point_report(name, pt, tol))
            .collect(),
        verified,
        residual_abs_diff: ver.abs_diff,
        residual_abs_co: ver.abs_co,
        residual_eq_a: ver.eq_a,
        residual_eq_b: ver.eq_b,
        residual_defect: ver.defect,
    }
}

/// Maps witness file matrices into validated effects.
pub fn witness_from_file(
    raw: &crate::io::WitnessFile,
    tol: &ToleranceConfig,
) -> std::result::Result<CoexistenceWitness, crate::exit::CliError> {
    let x = crate::io::effect_from_json(&raw.x, raw.dim, tol, "witness x")?;
    let y = crate::io::effect_from_json(&raw.y, raw.dim, tol, "witness y")?;
    let z = crate::io::effect_from_json(&raw.z, raw.dim, tol, "witness z")?;
    Ok(CoexistenceWitness { x, y, z })
}
