//! The effect algebra `E(H) = {a : 0 <= a <= I}`: validation, complement,
//! strictness, projections and the absolute meet/join operations.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, SpectralDecomposition, C64};
use crate::tol::ToleranceConfig;

/// A Hermitian matrix with spectrum validated (and clipped) into `[0, 1]`.
///
/// The eigendecomposition is computed once at validation time and cached; all
/// spectral predicates read it.
#[derive(Debug, Clone)]
pub struct Effect {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
}

impl Effect {
    /// Validates `0 <= H <= I` within `tau_psd * n`, clips the spectrum
    /// exactly into `[0, 1]` and rebuilds the matrix, so downstream exact
    /// identities stay testable.
    pub fn validate(h: HermitianMatrix, tol: &ToleranceConfig) -> Result<Effect> {
        let n = h.dim();
        let slack = tol.tau_psd * n as f64;
        let eig = h.eig()?;
        for &l in &eig.eigenvalues {
            if l < -slack || l > 1.0 + slack {
                return Err(Error::NotAnEffect { eigenvalue: l });
            }
        }
        Ok(Self::from_clipped(eig))
    }

    fn from_clipped(eig: SpectralDecomposition) -> Effect {
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|l| l.clamp(0.0, 1.0)).collect();
        let spectrum = SpectralDecomposition { eigenvalues: clipped, eigenvectors: eig.eigenvectors };
        let matrix = spectrum.reconstruct();
        Effect { matrix, spectrum }
    }

    pub fn identity(n: usize) -> Effect {
        Effect {
            matrix: HermitianMatrix::identity(n),
            spectrum: SpectralDecomposition {
                eigenvalues: vec![1.0; n],
                eigenvectors: ComplexMatrix::identity(n),
            },
        }
    }

    pub fn zero(n: usize) -> Effect {
        Effect {
            matrix: HermitianMatrix::zeros(n),
            spectrum: SpectralDecomposition {
                eigenvalues: vec![0.0; n],
                eigenvectors: ComplexMatrix::identity(n),
            },
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// `I - a`. An involution on `E(H)`.
    pub fn complement(&self) -> Effect {
        let n = self.dim();
        // Eigenvalues 1 - λ in reverse order stay ascending; reuse vectors.
        let eigenvalues: Vec<f64> =
            self.spectrum.eigenvalues.iter().rev().map(|l| 1.0 - l).collect();
        let u = self.spectrum.eigenvectors.inner();
        let mut vecs = nalgebra::DMatrix::<C64>::zeros(n, n);
        for dst in 0..n {
            vecs.set_column(dst, &u.column(n - 1 - dst));
        }
        let spectrum = SpectralDecomposition {
            eigenvalues,
            eigenvectors: ComplexMatrix::from_inner(vecs),
        };
        Effect { matrix: spectrum.reconstruct(), spectrum }
    }

    /// Strict effects have spectrum in the open interval, with margin:
    /// every eigenvalue in `(tau_strict, 1 - tau_strict)`.
    ///
    /// In finite dimension this matches the projection-sandwich definition:
    /// the spectral projection at eigenvalue 1 is the largest projection
    /// below the effect and the support projection the smallest above it, so
    /// "strict" holds exactly when neither 0 nor 1 is an eigenvalue.
    pub fn is_strict(&self, tol: &ToleranceConfig) -> bool {
        self.spectrum
            .eigenvalues
            .iter()
            .all(|&l| l > tol.tau_strict && l < 1.0 - tol.tau_strict)
    }

    /// `true` iff the spectrum lies within `tau_psd * n` of `{0, 1}`.
    pub fn is_projection(&self, tol: &ToleranceConfig) -> bool {
        let slack = tol.tau_psd * self.dim() as f64;
        self.spectrum
            .eigenvalues
            .iter()
            .all(|&l| l <= slack || (1.0 - l).abs() <= slack)
    }
}

impl PartialEq for Effect {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// An effect whose spectrum has been snapped exactly onto `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    effect: Effect,
    rank: usize,
}

impl Projection {
    pub fn validate(h: HermitianMatrix, tol: &ToleranceConfig) -> Result<Projection> {
        let n = h.dim();
        let slack = tol.tau_psd * n as f64;
        let eig = h.eig()?;
        for &l in &eig.eigenvalues {
            if l.abs() > slack && (1.0 - l).abs() > slack {
                return Err(Error::NotAProjection { eigenvalue: l });
            }
        }
        let snapped: Vec<f64> =
            eig.eigenvalues.iter().map(|&l| if l > 0.5 { 1.0 } else { 0.0 }).collect();
        let rank = snapped.iter().filter(|&&l| l == 1.0).count();
        let spectrum = SpectralDecomposition { eigenvalues: snapped, eigenvectors: eig.eigenvectors };
        let matrix = spectrum.reconstruct();
        Ok(Projection { effect: Effect { matrix, spectrum }, rank })
    }

    /// Projection onto the span of orthonormal columns `v` (n×k): `v v*`.
    pub(crate) fn from_orthonormal_columns(v: &nalgebra::DMatrix<C64>) -> Projection {
        let n = v.nrows();
        let rank = v.ncols();
        let m = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(v * v.adjoint()));
        let eig = m.eig().expect("projection eigendecomposition");
        // The spectrum is known: `rank` ones above `n - rank` zeros.
        let snapped: Vec<f64> = (0..n).map(|i| if i >= n - rank { 1.0 } else { 0.0 }).collect();
        let spectrum = SpectralDecomposition { eigenvalues: snapped, eigenvectors: eig.eigenvectors };
        Projection { effect: Effect { matrix: spectrum.reconstruct(), spectrum }, rank }
    }

    pub fn zero(n: usize) -> Projection {
        Projection { effect: Effect::zero(n), rank: 0 }
    }

    pub fn identity(n: usize) -> Projection {
        Projection { effect: Effect::identity(n), rank: n }
    }

    pub fn effect(&self) -> &Effect {
        &self.effect
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        self.effect.matrix()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.effect.dim()
    }

    pub fn complement(&self) -> Projection {
        Projection { effect: self.effect.complement(), rank: self.dim() - self.rank }
    }
}

/// Absolute meet `a ∧̇ b = ½(a + b - |a - b|)` on Hermitian operators.
///
/// The result need not be an effect; membership of the meet in `E(H)` is
/// precisely the predicate the coexistence module tests, so the raw Hermitian
/// is returned.
pub fn dot_meet(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let abs = (a - b).abs_op()?;
    Ok((&(a + b) - &abs).scale(0.5))
}

/// Absolute join `a ∨̇ b = ½(a + b + |a - b|)`.
pub fn dot_join(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let abs = (a - b).abs_op()?;
    Ok((&(a + b) + &abs).scale(0.5))
}

impl Effect {
    pub fn meet(&self, other: &Effect) -> Result<HermitianMatrix> {
        dot_meet(&self.matrix, &other.matrix)
    }

    pub fn join(&self, other: &Effect) -> Result<HermitianMatrix> {
        dot_join(&self.matrix, &other.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn herm(rows: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(rows).unwrap()
    }

    fn eff(rows: &[&[f64]]) -> Effect {
        Effect::validate(herm(rows), &tol()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert_eq!(half.eigenvalues(), &[0.5, 0.5]);

        match Effect::validate(herm(&[&[1.2, 0.0], &[0.0, 0.0]]), &tol()) {
            Err(Error::NotAnEffect { eigenvalue }) => assert!((eigenvalue - 1.2).abs() < 1e-12),
            other => panic!("expected NotAnEffect, got {other:?}"),
        }

        // Eigenvalues 1/2 ± 1/(2 sqrt 2) from the 2x2 quadratic.
        let e = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let lo = 0.5 - 0.5 / 2f64.sqrt();
        let hi = 0.5 + 0.5 / 2f64.sqrt();
        assert!((e.eigenvalues()[0] - lo).abs() < 1e-12);
        assert!((e.eigenvalues()[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn validation_clips_spectrum() {
        let h = herm(&[&[1.0 + 1e-10, 0.0], &[0.0, -1e-10]]);
        let e = Effect::validate(h, &tol()).unwrap();
        assert_eq!(e.eigenvalues(), &[0.0, 1.0]);
        assert!(e.matrix().approx_eq(&herm(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-9).unwrap());
    }

    #[test]
    fn complement_examples() {
        let i = Effect::identity(2);
        assert!(i.complement().matrix().op_norm().unwrap() < 1e-15);

        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert_eq!(half.complement(), half);

        let d = eff(&[&[0.3, 0.0], &[0.0, 0.9]]);
        let c = d.complement();
        assert!(c.matrix().approx_eq(&herm(&[&[0.7, 0.0], &[0.0, 0.1]]), 1e-14).unwrap());
        // Involution.
        assert!(c.complement().matrix().approx_eq(d.matrix(), 1e-14).unwrap());
    }

    #[test]
    fn dot_meet_examples() {
        let e = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let m = e.meet(&e).unwrap();
        assert!(m.approx_eq(e.matrix(), 1e-14).unwrap());

        let p = eff(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q_orth = eff(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert!(p.meet(&q_orth).unwrap().op_norm().unwrap() < 1e-14);

        // p = diag(1,0), q = (1/2) ones: meet = (p+q)/2 - I/(2 sqrt 2),
        // eigenvalues {1/2, (1 - sqrt 2)/2}.
        let q = eff(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let m = p.meet(&q).unwrap();
        let expected =
            &(p.matrix() + q.matrix()).scale(0.5) - &HermitianMatrix::identity(2).scale(0.5 / 2f64.sqrt());
        assert!(m.approx_eq(&expected, 1e-13).unwrap());
        let eigs = m.eig().unwrap().eigenvalues;
        assert!((eigs[0] - (1.0 - 2f64.sqrt()) / 2.0).abs() < 1e-13);
        assert!((eigs[1] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn dot_join_examples_and_sum_identity() {
        let e = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        assert!(e.join(&e).unwrap().approx_eq(e.matrix(), 1e-14).unwrap());

        let p = eff(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q_orth = eff(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let j = p.join(&q_orth).unwrap();
        assert!(j.approx_eq(&HermitianMatrix::identity(2), 1e-14).unwrap());

        let q = eff(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let meet = p.meet(&q).unwrap();
        let join = p.join(&q).unwrap();
        let sum = p.matrix() + q.matrix();
        assert!((&(&meet + &join) - &sum).op_norm().unwrap() < 1e-15);

        let expected_join =
            &(p.matrix() + q.matrix()).scale(0.5) + &HermitianMatrix::identity(2).scale(0.5 / 2f64.sqrt());
        assert!(join.approx_eq(&expected_join, 1e-13).unwrap());
    }

    #[test]
    fn meet_join_symmetry_and_order() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let b = eff(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let mab = a.meet(&b).unwrap();
        let mba = b.meet(&a).unwrap();
        assert!(mab.approx_eq(&mba, 1e-14).unwrap());

        // meet <= a <= join within tau_psd.
        let join = a.join(&b).unwrap();
        assert!((a.matrix() - &mab).is_psd(tol().tau_psd).unwrap());
        assert!((&join - a.matrix()).is_psd(tol().tau_psd).unwrap());
        assert!((b.matrix() - &mab).is_psd(tol().tau_psd).unwrap());
        assert!((&join - b.matrix()).is_psd(tol().tau_psd).unwrap());
    }

    #[test]
    fn de_morgan_shift() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let b = eff(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let lhs = &HermitianMatrix::identity(2) - &a.meet(&b).unwrap();
        let rhs = dot_join(a.complement().matrix(), b.complement().matrix()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-13).unwrap());
    }

    #[test]
    fn strictness() {
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert!(half.is_strict(&tol()));

        let p = eff(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(!p.is_strict(&tol()));
        assert!(!Effect::identity(2).is_strict(&tol()));
        assert!(!Effect::zero(2).is_strict(&tol()));

        let e = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        assert!(e.is_strict(&tol()));
    }

    #[test]
    fn projection_predicate_and_validation() {
        assert!(Effect::identity(2).is_projection(&tol()));
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert!(!half.is_projection(&tol()));

        let q = eff(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(q.is_projection(&tol()));
        // Idempotence, checked by direct multiplication.
        let sq = HermitianMatrix::symmetrize(q.matrix() * q.matrix());
        assert!(sq.approx_eq(q.matrix(), 1e-14).unwrap());

        let p = Projection::validate(herm(&[&[0.5, 0.5], &[0.5, 0.5]]), &tol()).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.effect().eigenvalues(), &[0.0, 1.0]);
        assert_eq!(p.complement().rank(), 1);

        match Projection::validate(HermitianMatrix::identity(2).scale(0.5), &tol()) {
            Err(Error::NotAProjection { eigenvalue }) => assert!((eigenvalue - 0.5).abs() < 1e-12),
            other => panic!("expected NotAProjection, got {other:?}"),
        }
    }
}
