//! Absolute compatibility and its central generalization: the defect
//! operator, decision procedures, the four-piece partition of unity and the
//! shift-and-scale reduction.
//!
//! The defect `x₀ = I - |a-b| - |I-a-b|` is the unique candidate witness, so
//! deciding x₀-compatibility reduces to three checks: the defect is PSD, has
//! norm strictly below one, and lies in the centre of the algebra generated
//! by the pair. No search is ever performed.

use crate::algebra::{is_in_centre, is_strict_in_algebra};
use crate::coexistence::is_partially_ortho_coexistent;
use crate::effects::{dot_meet, Effect};
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::tol::ToleranceConfig;

/// Classification of a pair of effects, with the defect operator and the
/// diagnostics behind every flag.
#[derive(Debug, Clone)]
pub struct CompatibilityReport {
    pub commute: bool,
    /// Partially ortho-coexistent.
    pub poc: bool,
    pub abs_compatible: bool,
    pub x0_compatible: bool,
    /// `I - |a-b| - |I-a-b|`, the candidate x₀.
    pub defect: HermitianMatrix,
    pub defect_norm: f64,
    pub defect_psd: bool,
    pub defect_central: bool,
    /// Set when the defect is a scalar matrix λI of an x₀-compatible pair.
    pub lambda: Option<f64>,
    /// `‖ab - ba‖_op`.
    pub commutator_norm: f64,
}

/// The four-piece partition of unity attached to an absolutely compatible
/// pair: `x + y + z + w = I` with `y z = 0` and `x w = 0`.
#[derive(Debug, Clone)]
pub struct AbsCompatPartition {
    /// `a ∧̇ b`.
    pub x: Effect,
    /// `a ∧̇ (I - b)`.
    pub y: Effect,
    /// `(I - a) ∧̇ b`.
    pub z: Effect,
    /// `(I - a) ∧̇ (I - b)`.
    pub w: Effect,
}

/// `I - |a-b| - |I-a-b|`.
pub fn compat_defect(a: &Effect, b: &Effect) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let n = a.dim();
    let id = HermitianMatrix::identity(n);
    let abs_diff = (a.matrix() - b.matrix()).abs_op()?;
    let abs_co = (&(&id - a.matrix()) - b.matrix()).abs_op()?;
    Ok(&(&id - &abs_diff) - &abs_co)
}

/// `a △ b`: the defect vanishes within `tau_eq * n`.
pub fn is_abs_compatible(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<bool> {
    Ok(compat_defect(a, b)?.op_norm()? <= tol.tau_eq * a.dim() as f64)
}

/// The partition of unity of an absolutely compatible pair.
pub fn abs_compat_partition(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<AbsCompatPartition> {
    let defect_norm = compat_defect(a, b)?.op_norm()?;
    if defect_norm > tol.tau_eq * a.dim() as f64 {
        return Err(Error::NotAbsCompatible { defect_norm });
    }
    let ca = a.complement();
    let cb = b.complement();
    let x = Effect::validate(a.meet(b)?, tol)?;
    let y = Effect::validate(a.meet(&cb)?, tol)?;
    let z = Effect::validate(ca.meet(b)?, tol)?;
    let w = Effect::validate(ca.meet(&cb)?, tol)?;
    Ok(AbsCompatPartition { x, y, z, w })
}

impl AbsCompatPartition {
    /// Max residual over the partition identities:
    /// `x+y+z+w = I`, `y z = 0`, `x w = 0`.
    pub fn max_residual(&self) -> Result<f64> {
        let n = self.x.dim();
        let id = HermitianMatrix::identity(n);
        let sum = &(&(self.x.matrix() + self.y.matrix()) + self.z.matrix()) + self.w.matrix();
        let r_sum = (&sum - &id).op_norm()?;
        let r_yz = (self.y.matrix() * self.z.matrix()).op_norm();
        let r_xw = (self.x.matrix() * self.w.matrix()).op_norm();
        Ok(r_sum.max(r_yz).max(r_xw))
    }
}

/// Full classification of a pair. See [`CompatibilityReport`].
pub fn is_x0_compatible(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<CompatibilityReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let n = a.dim();
    let defect = compat_defect(a, b)?;
    let defect_norm = defect.op_norm()?;
    let defect_psd = defect.is_psd(tol.tau_psd)?;
    let abs_compatible = defect_norm <= tol.tau_eq * n as f64;
    let defect_central = is_in_centre(&defect, a, b, tol)?;
    let x0_compatible = defect_psd && defect_norm < 1.0 - tol.tau_strict && defect_central;

    let commutator_norm = a.matrix().as_matrix().commutator(b.matrix().as_matrix())?.op_norm();
    let commute = commutator_norm <= tol.eq_scaled(n, 1.0);
    let poc = is_partially_ortho_coexistent(a, b, tol)?.0;

    let lambda = if x0_compatible {
        let mean = defect.trace() / n as f64;
        let scalar_residual = (&defect - &HermitianMatrix::identity(n).scale(mean)).op_norm()?;
        if scalar_residual <= tol.tau_eq * n as f64 {
            // Abs-compatible pairs carry rounding-level defect traces; snap
            // them so reports stay byte-stable.
            Some(if mean.abs() <= tol.tau_eq { 0.0 } else { mean })
        } else {
            None
        }
    } else {
        None
    };

    Ok(CompatibilityReport {
        commute,
        poc,
        abs_compatible,
        x0_compatible,
        defect,
        defect_norm,
        defect_psd,
        defect_central,
        lambda,
        commutator_norm,
    })
}

/// The shift-and-scale map `e -> (I - x₀)⁻¹ (e - ½ x₀)`.
///
/// Requires `‖x₀‖ < 1` and `[x₀, e] = 0`. For an x₀-compatible pair both
/// images are again effects and the image pair is absolutely compatible.
pub fn shift_scale(e: &Effect, x0: &HermitianMatrix, tol: &ToleranceConfig) -> Result<Effect> {
    if e.dim() != x0.dim() {
        return Err(Error::DimMismatch { left: e.dim(), right: x0.dim() });
    }
    let n = e.dim();
    let norm = x0.op_norm()?;
    if norm >= 1.0 - tol.tau_strict {
        return Err(Error::ShiftNormTooLarge { norm });
    }
    let comm = x0.as_matrix().commutator(e.matrix().as_matrix())?.op_norm();
    if comm > tol.eq_scaled(n, 1.0) {
        return Err(Error::NotCommuting { residual: comm });
    }
    let inv = (&HermitianMatrix::identity(n) - x0).inverse(tol.tau_psd)?;
    let shifted = e.matrix() - &x0.scale(0.5);
    let image = HermitianMatrix::symmetrize(&inv * &shifted);
    Effect::validate(image, tol)
}

/// Whether the shift-and-scale images of both effects are strict in the
/// generated algebra.
pub fn is_x0_strict_pair(
    a: &Effect,
    b: &Effect,
    x0: &HermitianMatrix,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let sa = shift_scale(a, x0, tol)?;
    let sb = shift_scale(b, x0, tol)?;
    Ok(is_strict_in_algebra(&sa, tol) && is_strict_in_algebra(&sb, tol))
}

/// Residuals of the five equivalent absolute-compatibility clauses; all of
/// them vanish together exactly when `a △ b`.
///
/// Returned in clause order: defect norm; membership-plus-orthogonality of
/// the meet/join; the two meet-splitting identities; the partition sum.
pub fn abs_compat_clause_residuals(a: &Effect, b: &Effect) -> Result<[f64; 5]> {
    let n = a.dim();
    let id = HermitianMatrix::identity(n);
    let ca = a.complement();
    let cb = b.complement();

    let r1 = compat_defect(a, b)?.op_norm()?;

    let meet = a.meet(b)?;
    let join = a.join(b)?;
    let meet_neg = (-meet.min_eigenvalue()?).max(0.0);
    let join_excess = (-(&id - &join).min_eigenvalue()?).max(0.0);
    let ortho = (&meet * &(&id - &join)).op_norm();
    let r2 = meet_neg.max(join_excess).max(ortho);

    let r3 = (&(&meet + &a.meet(&cb)?) - a.matrix()).op_norm()?;
    let r4 = (&(&meet + &ca.meet(b)?) - b.matrix()).op_norm()?;

    let sum = &(&(&meet + &a.meet(&cb)?) + &ca.meet(b)?) + &ca.meet(&cb)?;
    let r5 = (&sum - &id).op_norm()?;

    Ok([r1, r2, r3, r4, r5])
}

/// Clause-(2) orthogonality product `(a ∧̇ b)(I - a ∨̇ b)` as a raw matrix
/// norm; exposed separately for reports.
pub fn meet_join_orthogonality(a: &Effect, b: &Effect) -> Result<f64> {
    let n = a.dim();
    let meet = dot_meet(a.matrix(), b.matrix())?;
    let join = a.join(b)?;
    Ok((&meet * &(&HermitianMatrix::identity(n) - &join)).op_norm())
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

    fn half_identity(n: usize) -> Effect {
        Effect::validate(HermitianMatrix::identity(n).scale(0.5), &tol()).unwrap()
    }

    /// The worked quarter pair: absolutely compatible strict effects.
    fn quarter_pair() -> (Effect, Effect) {
        (
            eff(&[&[0.25, 0.25], &[0.25, 0.75]]),
            eff(&[&[0.25, -0.25], &[-0.25, 0.75]]),
        )
    }

    /// The worked pair with scalar defect 0.4 I.
    fn lambda_pair() -> (Effect, Effect) {
        (
            eff(&[&[0.7, 0.1], &[0.1, 0.3]]),
            eff(&[&[0.7, -0.1], &[-0.1, 0.3]]),
        )
    }

    #[test]
    fn defect_examples() {
        let h = half_identity(2);
        let d = compat_defect(&h, &h).unwrap();
        assert!(d.approx_eq(&HermitianMatrix::identity(2), 1e-14).unwrap());

        let (a, b) = quarter_pair();
        assert!(compat_defect(&a, &b).unwrap().op_norm().unwrap() < 1e-12);

        let (a, b) = lambda_pair();
        let d = compat_defect(&a, &b).unwrap();
        assert!(d.approx_eq(&HermitianMatrix::identity(2).scale(0.4), 1e-12).unwrap());
    }

    #[test]
    fn abs_compatibility_examples() {
        // A projection commuting with an effect is absolutely compatible
        // with it.
        let a = Effect::validate(HermitianMatrix::diagonal(&[0.3, 0.8]), &tol()).unwrap();
        let p = Effect::validate(HermitianMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap();
        assert!(is_abs_compatible(&a, &p, &tol()).unwrap());

        let (qa, qb) = quarter_pair();
        assert!(is_abs_compatible(&qa, &qb, &tol()).unwrap());

        let h = half_identity(2);
        assert!(!is_abs_compatible(&h, &h, &tol()).unwrap());
    }

    #[test]
    fn partition_examples() {
        let p = Effect::validate(HermitianMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap();
        let part = abs_compat_partition(&p, &p, &tol()).unwrap();
        assert!(part.x.matrix().approx_eq(p.matrix(), 1e-12).unwrap());
        assert!(part.y.matrix().op_norm().unwrap() < 1e-12);
        assert!(part.z.matrix().op_norm().unwrap() < 1e-12);
        assert!(part.w.matrix().approx_eq(p.complement().matrix(), 1e-12).unwrap());
        assert!(part.max_residual().unwrap() < 1e-12);

        let (a, b) = quarter_pair();
        let part = abs_compat_partition(&a, &b, &tol()).unwrap();
        assert!(part.max_residual().unwrap() < 1e-10);
        // Every piece of the partition for this pair is rank-deficient.
        for piece in [&part.x, &part.y, &part.z, &part.w] {
            assert!(piece.eigenvalues()[0] < 1e-8);
        }
        assert!(meet_join_orthogonality(&a, &b).unwrap() < 1e-10);

        // Commuting projection pair: the partition splits along the joint
        // eigenspaces.
        let c = Effect::validate(HermitianMatrix::diagonal(&[1.0, 1.0, 0.0]), &tol()).unwrap();
        let d = Effect::validate(HermitianMatrix::diagonal(&[1.0, 0.0, 0.0]), &tol()).unwrap();
        let part = abs_compat_partition(&c, &d, &tol()).unwrap();
        assert!(part.x.matrix().approx_eq(&HermitianMatrix::diagonal(&[1.0, 0.0, 0.0]), 1e-12).unwrap());
        assert!(part.y.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.0, 1.0, 0.0]), 1e-12).unwrap());
        assert!(part.z.matrix().op_norm().unwrap() < 1e-12);
        assert!(part.w.matrix().approx_eq(&HermitianMatrix::diagonal(&[0.0, 0.0, 1.0]), 1e-12).unwrap());

        let h = half_identity(2);
        match abs_compat_partition(&h, &h, &tol()) {
            Err(Error::NotAbsCompatible { defect_norm }) => {
                assert!((defect_norm - 1.0).abs() < 1e-12)
            }
            other => panic!("expected NotAbsCompatible, got {other:?}"),
        }
    }

    #[test]
    fn x0_reports() {
        let (a, b) = quarter_pair();
        let r = is_x0_compatible(&a, &b, &tol()).unwrap();
        assert!(r.abs_compatible && r.x0_compatible && r.poc);
        assert!(!r.commute);
        assert_eq!(r.lambda, Some(0.0));
        assert!(r.defect_norm < 1e-12);

        let (a, b) = lambda_pair();
        let r = is_x0_compatible(&a, &b, &tol()).unwrap();
        assert!(!r.abs_compatible);
        assert!(r.x0_compatible && r.defect_psd && r.defect_central && r.poc);
        let lambda = r.lambda.unwrap();
        assert!((lambda - 0.4).abs() < 1e-12);

        let h = half_identity(2);
        let r = is_x0_compatible(&h, &h, &tol()).unwrap();
        assert!(!r.x0_compatible);
        assert!((r.defect_norm - 1.0).abs() < 1e-12);
        assert_eq!(r.lambda, None);
    }

    #[test]
    fn report_implications() {
        // abs-compatible => x0-compatible (defect 0) => poc, on the worked
        // pairs and on a commuting pair.
        let cases = [
            quarter_pair(),
            lambda_pair(),
            (
                Effect::validate(HermitianMatrix::diagonal(&[0.3, 0.8]), &tol()).unwrap(),
                Effect::validate(HermitianMatrix::diagonal(&[0.6, 0.2]), &tol()).unwrap(),
            ),
        ];
        for (a, b) in cases {
            let r = is_x0_compatible(&a, &b, &tol()).unwrap();
            if r.abs_compatible {
                assert!(r.x0_compatible);
            }
            if r.x0_compatible {
                assert!(r.poc);
            }
        }
    }

    #[test]
    fn shift_scale_examples() {
        let (a, _) = lambda_pair();
        let zero = HermitianMatrix::zeros(2);
        let same = shift_scale(&a, &zero, &tol()).unwrap();
        assert!(same.matrix().approx_eq(a.matrix(), 1e-12).unwrap());

        let h = half_identity(2);
        let x0 = HermitianMatrix::identity(2).scale(0.3);
        let fixed = shift_scale(&h, &x0, &tol()).unwrap();
        assert!(fixed.matrix().approx_eq(h.matrix(), 1e-12).unwrap());

        let x0 = HermitianMatrix::identity(2).scale(0.4);
        let img = shift_scale(&a, &x0, &tol()).unwrap();
        let expected = HermitianMatrix::from_real_rows(&[&[0.5, 0.1], &[0.1, 0.1]])
            .unwrap()
            .scale(1.0 / 0.6);
        assert!(img.matrix().approx_eq(&expected, 1e-12).unwrap());
    }

    #[test]
    fn shift_scale_error_paths() {
        let (a, _) = lambda_pair();
        let too_big = HermitianMatrix::identity(2);
        assert!(matches!(
            shift_scale(&a, &too_big, &tol()),
            Err(Error::ShiftNormTooLarge { .. })
        ));

        let non_commuting = HermitianMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.1]]).unwrap();
        assert!(matches!(
            shift_scale(&a, &non_commuting, &tol()),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn x0_strict_pairs() {
        let (a, b) = quarter_pair();
        let zero = HermitianMatrix::zeros(2);
        assert!(is_x0_strict_pair(&a, &b, &zero, &tol()).unwrap());

        let p = Effect::validate(HermitianMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap();
        assert!(!is_x0_strict_pair(&p, &p, &zero, &tol()).unwrap());

        let (a, b) = lambda_pair();
        let x0 = HermitianMatrix::identity(2).scale(0.4);
        assert!(is_x0_strict_pair(&a, &b, &x0, &tol()).unwrap());
    }

    #[test]
    fn prop_3_5_bounds_and_round_trip() {
        let (a, b) = lambda_pair();
        let r = is_x0_compatible(&a, &b, &tol()).unwrap();
        assert!(r.x0_compatible);
        let x0 = &r.defect;

        // ½x₀ <= a, b <= I - ½x₀.
        let lower = x0.scale(0.5);
        let id = HermitianMatrix::identity(2);
        for e in [&a, &b] {
            assert!((e.matrix() - &lower).is_psd(tol().tau_psd).unwrap());
            assert!((&(&id - &lower) - e.matrix()).is_psd(tol().tau_psd).unwrap());
        }

        // Meet and join bounds.
        let meet = a.meet(&b).unwrap();
        let join = a.join(&b).unwrap();
        assert!((&meet - &lower).is_psd(tol().tau_psd).unwrap());
        assert!((&(&id - &lower) - &join).is_psd(tol().tau_psd).unwrap());

        // Shift-and-scale maps the pair onto an absolutely compatible pair.
        let sa = shift_scale(&a, x0, &tol()).unwrap();
        let sb = shift_scale(&b, x0, &tol()).unwrap();
        assert!(is_abs_compatible(&sa, &sb, &tol()).unwrap());
    }

    #[test]
    fn complement_symmetry_of_abs_compat() {
        let (a, b) = quarter_pair();
        assert!(is_abs_compatible(&b, &a, &tol()).unwrap());
        assert!(is_abs_compatible(&a.complement(), &b, &tol()).unwrap());
        assert!(is_abs_compatible(&a, &b.complement(), &tol()).unwrap());
        assert!(is_abs_compatible(&a.complement(), &b.complement(), &tol()).unwrap());
    }

    #[test]
    fn self_complement_characterizes_projections() {
        let p = Effect::validate(HermitianMatrix::diagonal(&[1.0, 0.0]), &tol()).unwrap();
        assert!(is_abs_compatible(&p, &p.complement(), &tol()).unwrap());

        let (a, _) = quarter_pair();
        assert!(!is_abs_compatible(&a, &a.complement(), &tol()).unwrap());
    }

    #[test]
    fn clause_residuals_agree() {
        let (a, b) = quarter_pair();
        let rs = abs_compat_clause_residuals(&a, &b).unwrap();
        assert!(rs.iter().all(|&r| r < 1e-10), "{rs:?}");

        let c = eff(&[&[0.6, 0.2], &[0.2, 0.5]]);
        let d = eff(&[&[0.5, -0.1], &[-0.1, 0.8]]);
        let rs = abs_compat_clause_residuals(&c, &d).unwrap();
        assert!(rs.iter().all(|&r| r > 1e-5), "{rs:?}");
    }
}
