//! Coexistence-witness verification and the decision procedure plus unique
//! decomposition for partial ortho-coexistence.
//!
//! A pair `a, b` is partially ortho-coexistent exactly when both `a ∧̇ b` and
//! `a ∨̇ b` lie in `E(H)`; the witness `(x, y, z)` is then forced:
//! `x = a ∧̇ b`, `y = (a-b)⁺`, `z = (a-b)⁻`.

use crate::effects::{dot_meet, Effect, Projection};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::tol::ToleranceConfig;

/// A claimed witness for plain coexistence: `a = x + y`, `b = x + z` with
/// `x + y + z ∈ E(H)`. Witnesses for plain coexistence are not unique; this
/// type only carries one for verification.
#[derive(Debug, Clone)]
pub struct CoexistenceWitness {
    pub x: Effect,
    pub y: Effect,
    pub z: Effect,
}

impl CoexistenceWitness {
    /// The lower bound `c = x` of the sandwich formulation.
    pub fn c(&self) -> &Effect {
        &self.x
    }

    /// The upper bound `d = x + y + z` of the sandwich formulation.
    pub fn d(&self) -> HermitianMatrix {
        &(self.x.matrix() + self.y.matrix()) + self.z.matrix()
    }
}

/// The unique decomposition of a partially ortho-coexistent pair.
#[derive(Debug, Clone)]
pub struct OrthoDecomposition {
    /// `a ∧̇ b`.
    pub x: Effect,
    /// `(a - b)⁺`.
    pub y: Effect,
    /// `(a - b)⁻`.
    pub z: Effect,
    /// `a ∨̇ b = x + y + z`.
    pub join: Effect,
    /// `I - a ∨̇ b`.
    pub residual: Effect,
}

/// Checks all witness identities for `(a, b)`:
/// `a = x + y`, `b = x + z`, `x + y + z ∈ E(H)`, `c <= a, b <= d` and
/// `a + b = c + d`, each within the scaled equality tolerance.
pub fn verify_coexistence_witness(
    a: &Effect,
    b: &Effect,
    w: &CoexistenceWitness,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let n = a.dim();
    for other in [b.dim(), w.x.dim(), w.y.dim(), w.z.dim()] {
        if other != n {
            return Err(Error::DimMismatch { left: n, right: other });
        }
    }
    let eq = tol.eq_scaled(n, 1.0);

    let xy = w.x.matrix() + w.y.matrix();
    if !(a.matrix().approx_eq(&xy, eq)?) {
        return Ok(false);
    }
    let xz = w.x.matrix() + w.z.matrix();
    if !(b.matrix().approx_eq(&xz, eq)?) {
        return Ok(false);
    }
    let d = w.d();
    if Effect::validate(d.clone(), tol).is_err() {
        return Ok(false);
    }

    let c = w.c().matrix();
    let sandwich_ok = (a.matrix() - c).is_psd(tol.tau_eq)?
        && (b.matrix() - c).is_psd(tol.tau_eq)?
        && (&d - a.matrix()).is_psd(tol.tau_eq)?
        && (&d - b.matrix()).is_psd(tol.tau_eq)?;
    if !sandwich_ok {
        return Ok(false);
    }

    let sum = a.matrix() + b.matrix();
    let cd = c + &d;
    Ok(sum.approx_eq(&cd, eq)?)
}

/// Decides `a ∧̇ b, a ∨̇ b ∈ E(H)` and on success returns the forced witness.
pub fn is_partially_ortho_coexistent(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<(bool, Option<OrthoDecomposition>)> {
    match decompose_poc(a, b, tol) {
        Ok(d) => Ok((true, Some(d))),
        Err(Error::NotPartiallyOrthoCoexistent { .. }) => Ok((false, None)),
        Err(e) => Err(e),
    }
}

/// The unique `(x, y, z)` with `a = x + y`, `b = x + z`, `y z = 0`.
///
/// Borderline eigenvalues within the scaled PSD tolerance count as members
/// (closed-cone convention).
pub fn decompose_poc(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<OrthoDecomposition> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let n = a.dim();
    let meet = a.meet(b)?;
    let join = a.join(b)?;
    let meet_min = meet.min_eigenvalue()?;
    let comp_min = (&HermitianMatrix::identity(n) - &join).min_eigenvalue()?;
    let slack = tol.tau_psd * n as f64;
    let violating = meet_min.min(comp_min);
    if violating < -slack {
        return Err(Error::NotPartiallyOrthoCoexistent { violating_eigenvalue: violating });
    }

    let diff = a.matrix() - b.matrix();
    let x = Effect::validate(meet, tol)?;
    let y = Effect::validate(diff.pos_part()?, tol)?;
    let z = Effect::validate(diff.neg_part()?, tol)?;
    let join = Effect::validate(join, tol)?;
    let residual = join.complement();
    Ok(OrthoDecomposition { x, y, z, join, residual })
}

/// The split of `a` from the three-way equivalence for partially
/// ortho-coexistent pairs: `a = a₁ + a₂` with `a₁ <= a ∧̇ b`, `a₂ <= I - b`.
pub fn split_thm_2_4(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<(Effect, Effect)> {
    let d = decompose_poc(a, b, tol)?;
    let a1 = d.x;
    let a2 = Effect::validate(a.matrix() - a1.matrix(), tol)?;
    Ok((a1, a2))
}

/// Report for the projection-pair meet test: a PSD meet of two projections
/// forces commutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionMeetReport {
    pub meet_psd: bool,
    pub commutator_norm: f64,
}

pub fn check_projection_meet(
    p: &Projection,
    q: &Projection,
    tol: &ToleranceConfig,
) -> Result<ProjectionMeetReport> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch { left: p.dim(), right: q.dim() });
    }
    let meet = dot_meet(p.matrix(), q.matrix())?;
    let meet_psd = meet.is_psd(tol.tau_psd)?;
    let commutator_norm = p.matrix().as_matrix().commutator(q.matrix().as_matrix())?.op_norm();
    Ok(ProjectionMeetReport { meet_psd, commutator_norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn eff(rows: &[&[f64]]) -> Effect {
        Effect::validate(HermitianMatrix::from_real_rows(rows).unwrap(), &tol()).unwrap()
    }

    fn eff_diag(d: &[f64]) -> Effect {
        Effect::validate(HermitianMatrix::diagonal(d), &tol()).unwrap()
    }

    #[test]
    fn witness_trivial_cases() {
        let x = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let w = CoexistenceWitness { x: x.clone(), y: Effect::zero(2), z: Effect::zero(2) };
        assert!(verify_coexistence_witness(&x, &x, &w, &tol()).unwrap());

        let a = eff_diag(&[1.0, 0.0]);
        let b = eff_diag(&[0.0, 1.0]);
        let w = CoexistenceWitness { x: Effect::zero(2), y: a.clone(), z: b.clone() };
        assert!(verify_coexistence_witness(&a, &b, &w, &tol()).unwrap());
    }

    #[test]
    fn witness_scalar_case() {
        let a = eff_diag(&[0.75]);
        let w = CoexistenceWitness {
            x: eff_diag(&[0.5]),
            y: eff_diag(&[0.25]),
            z: eff_diag(&[0.25]),
        };
        assert!(verify_coexistence_witness(&a, &a, &w, &tol()).unwrap());

        // Broken witness: x + y no longer reproduces a.
        let broken = CoexistenceWitness {
            x: eff_diag(&[0.6]),
            y: eff_diag(&[0.25]),
            z: eff_diag(&[0.25]),
        };
        assert!(!verify_coexistence_witness(&a, &a, &broken, &tol()).unwrap());
    }

    #[test]
    fn witness_rejects_sum_outside_effect_algebra() {
        let a = eff_diag(&[0.9]);
        let w = CoexistenceWitness {
            x: eff_diag(&[0.4]),
            y: eff_diag(&[0.5]),
            z: eff_diag(&[0.5]),
        };
        // x + y + z = 1.4 > 1 fails membership even though a = x + y holds.
        assert!(!verify_coexistence_witness(&a, &a, &w, &tol()).unwrap());
    }

    #[test]
    fn commuting_pair_is_poc() {
        let a = eff_diag(&[0.3, 0.8]);
        let b = eff_diag(&[0.6, 0.2]);
        let (ok, d) = is_partially_ortho_coexistent(&a, &b, &tol()).unwrap();
        assert!(ok);
        let d = d.unwrap();
        assert!(d.x.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.3, 0.2]), 1e-12).unwrap());
        assert!(d.y.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.0, 0.6]), 1e-12).unwrap());
        assert!(d.z.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.3, 0.0]), 1e-12).unwrap());
    }

    #[test]
    fn non_commuting_projections_are_not_poc() {
        let p = eff(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = eff(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let (ok, d) = is_partially_ortho_coexistent(&p, &q, &tol()).unwrap();
        assert!(!ok);
        assert!(d.is_none());
        match decompose_poc(&p, &q, &tol()) {
            Err(Error::NotPartiallyOrthoCoexistent { violating_eigenvalue }) => {
                assert!((violating_eigenvalue - (1.0 - 2f64.sqrt()) / 2.0).abs() < 1e-12);
            }
            other => panic!("expected NotPartiallyOrthoCoexistent, got {other:?}"),
        }
    }

    #[test]
    fn equal_pair_decomposition() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let (ok, d) = is_partially_ortho_coexistent(&a, &a, &tol()).unwrap();
        assert!(ok);
        let d = d.unwrap();
        assert!(d.x.matrix().approx_eq(a.matrix(), 1e-12).unwrap());
        assert!(d.y.matrix().op_norm().unwrap() < 1e-12);
        assert!(d.z.matrix().op_norm().unwrap() < 1e-12);
    }

    #[test]
    fn orthogonal_projection_decomposition() {
        let a = eff_diag(&[1.0, 0.0]);
        let b = eff_diag(&[0.0, 1.0]);
        let d = decompose_poc(&a, &b, &tol()).unwrap();
        assert!(d.x.matrix().op_norm().unwrap() < 1e-14);
        assert!(d.y.matrix().approx_eq(a.matrix(), 1e-14).unwrap());
        assert!(d.z.matrix().approx_eq(b.matrix(), 1e-14).unwrap());
        assert!(d.join.matrix().approx_eq(&HermitianMatrix::identity(2), 1e-14).unwrap());
        // y z = 0 and x + y + z = join.
        let yz = d.y.matrix() * d.z.matrix();
        assert!(yz.op_norm() < 1e-14);
        let sum = &(d.x.matrix() + d.y.matrix()) + d.z.matrix();
        assert!(sum.approx_eq(d.join.matrix(), 1e-14).unwrap());
    }

    #[test]
    fn split_examples() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let (a1, a2) = split_thm_2_4(&a, &a, &tol()).unwrap();
        assert!(a1.matrix().approx_eq(a.matrix(), 1e-12).unwrap());
        assert!(a2.matrix().op_norm().unwrap() < 1e-12);

        let a = eff_diag(&[0.3, 0.8]);
        let b = eff_diag(&[0.6, 0.2]);
        let (a1, a2) = split_thm_2_4(&a, &b, &tol()).unwrap();
        assert!(a1.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.3, 0.2]), 1e-12).unwrap());
        assert!(a2.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.0, 0.6]), 1e-12).unwrap());
        // a1 <= meet and a2 <= I - b.
        let meet = a.meet(&b).unwrap();
        assert!((&meet - a1.matrix()).is_psd(tol().tau_psd).unwrap());
        assert!((b.complement().matrix() - a2.matrix()).is_psd(tol().tau_psd).unwrap());

        let p = eff_diag(&[1.0, 0.0]);
        let q = eff_diag(&[0.0, 1.0]);
        let (a1, a2) = split_thm_2_4(&p, &q, &tol()).unwrap();
        assert!(a1.matrix().op_norm().unwrap() < 1e-14);
        assert!(a2.matrix().approx_eq(p.matrix(), 1e-14).unwrap());
    }

    #[test]
    fn projection_meet_reports() {
        let p = Projection::validate(HermitianMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap();
        let r = check_projection_meet(&p, &p, &tol()).unwrap();
        assert!(r.meet_psd);
        assert!(r.commutator_norm < 1e-15);

        let q = Projection::validate(
            HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap(),
            &tol(),
        )
        .unwrap();
        let r = check_projection_meet(&p, &q, &tol()).unwrap();
        assert!(!r.meet_psd);
        assert!((r.commutator_norm - 0.5).abs() < 1e-13);

        let orth = p.complement();
        let r = check_projection_meet(&p, &orth, &tol()).unwrap();
        assert!(r.meet_psd);
        assert!(r.commutator_norm < 1e-15);
    }

    #[test]
    fn uniqueness_reconstruction() {
        // Build a, b from a chosen (x, y, z) with y z = 0, then recover.
        let u = HermitianMatrix::from_real_rows(&[&[0.3, 0.2], &[0.2, -0.4]]).unwrap();
        let y = u.pos_part().unwrap().scale(0.8);
        let z = u.neg_part().unwrap().scale(0.8);
        let s = &y + &z;
        // x <= I - s keeps x + y + z inside the effect algebra.
        let room = (&HermitianMatrix::identity(2) - &s).sqrt_psd(1e-10).unwrap();
        let seed_eff = HermitianMatrix::from_real_rows(&[&[0.9, 0.1], &[0.1, 0.5]]).unwrap();
        let x = HermitianMatrix::symmetrize(&(&room * &seed_eff) * room.as_matrix());
        let a = Effect::validate(&x + &y, &tol()).unwrap();
        let b = Effect::validate(&x + &z, &tol()).unwrap();

        let d = decompose_poc(&a, &b, &tol()).unwrap();
        assert!(d.x.matrix().approx_eq(&HermitianMatrix::symmetrize(x.into_matrix()), 1e-10).unwrap());
        assert!(d.y.matrix().approx_eq(&y, 1e-10).unwrap());
        assert!(d.z.matrix().approx_eq(&z, 1e-10).unwrap());
    }

    #[test]
    fn complement_closure() {
        let a = eff_diag(&[0.3, 0.8]);
        let b = eff_diag(&[0.6, 0.2]);
        assert!(is_partially_ortho_coexistent(&a, &b, &tol()).unwrap().0);
        let (ok, _) =
            is_partially_ortho_coexistent(&a.complement(), &b.complement(), &tol()).unwrap();
        assert!(ok);
    }
}
