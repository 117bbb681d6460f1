//! Dense complex matrices, Hermitian validation, spectral decomposition and
//! the functional calculus every other module consumes.
//!
//! Everything is immutable after construction and all operations are pure, so
//! values can be shared freely across threads.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Iteration cap handed to the eigensolver before reporting non-convergence.
const EIG_MAX_SWEEPS: usize = 10_000;

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        Ok(ComplexMatrix {
            inner: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix { inner: DMatrix::from_fn(n, n, f) }
    }

    pub fn zeros(n: usize) -> Self {
        ComplexMatrix { inner: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix { inner: DMatrix::identity(n, n) }
    }

    pub(crate) fn from_inner(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        ComplexMatrix { inner }
    }

    pub(crate) fn inner(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix { inner: self.inner.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.inner.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix { inner: &self.inner * s }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Frobenius inner product `tr(self† other)`.
    pub fn frobenius_inner(&self, other: &Self) -> C64 {
        self.inner.dotc(&other.inner)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.inner.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.inner.clone().singular_values().max()
    }

    /// `max_ij |e_ij - conj(e_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(ComplexMatrix { inner: &self.inner * &other.inner - &other.inner * &self.inner })
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { inner: &self.inner - &rhs.inner }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { inner: &self.inner * &rhs.inner }
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { inner: -&self.inner }
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimMismatch { left, right });
    }
    Ok(())
}

/// Complex matrix validated (and then exactly symmetrized) as Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    matrix: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry within `tau_herm`, then symmetrizes
    /// exactly: `entries <- (entries + adjoint)/2`. Near-Hermitian input is
    /// accepted because file round-trips introduce last-ulp asymmetry.
    pub fn new(matrix: ComplexMatrix, tau_herm: f64) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > tau_herm {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self::symmetrize(matrix))
    }

    /// Symmetrizes without a deviation check. For results of operations that
    /// are Hermitian up to rounding (e.g. `U f(Λ) U*`).
    pub fn symmetrize(matrix: ComplexMatrix) -> Self {
        let adj = matrix.inner.adjoint();
        let sym = (&matrix.inner + adj).map(|z| z * 0.5);
        HermitianMatrix { matrix: ComplexMatrix { inner: sym } }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix { matrix: ComplexMatrix::identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { matrix: ComplexMatrix::zeros(n) }
    }

    /// Convenience constructor from real entries (must be symmetric within
    /// `1e-12`); mostly useful in tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
        }
        let m = ComplexMatrix::from_fn(n, |i, j| C64::new(rows[i][j], 0.0));
        HermitianMatrix::new(m, 1e-12)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        HermitianMatrix {
            matrix: ComplexMatrix::from_fn(n, |i, j| {
                if i == j { C64::new(entries[i], 0.0) } else { C64::new(0.0, 0.0) }
            }),
        }
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix.entry(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix { matrix: self.matrix.scale(C64::new(s, 0.0)) }
    }

    /// Eigendecomposition with eigenvalues ascending and a deterministic
    /// phase convention for the eigenvectors (largest-magnitude component of
    /// each column is real and nonnegative).
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        let n = self.dim();
        let se = self
            .matrix
            .inner
            .clone()
            .try_symmetric_eigen(f64::EPSILON, EIG_MAX_SWEEPS)
            .ok_or(Error::EigNonConvergence { dim: n, norm_bound: self.matrix.max_abs_entry() * n as f64 })?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());

        let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let mut vecs = DMatrix::<C64>::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let col = se.eigenvectors.column(src);
            // Deterministic phase: rotate the largest component onto the
            // positive real axis; ties resolved by first index.
            let mut k = 0;
            let mut best = 0.0;
            for (idx, z) in col.iter().enumerate() {
                let a = z.norm();
                if a > best {
                    best = a;
                    k = idx;
                }
            }
            let phase = if best > 0.0 { col[k].conj() / best } else { C64::new(1.0, 0.0) };
            for i in 0..n {
                vecs[(i, dst)] = col[i] * phase;
            }
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            eigenvectors: ComplexMatrix { inner: vecs },
        })
    }

    /// Spectral calculus: `U diag(f(λ_i)) U*`.
    pub fn func_calc(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        Ok(self.eig()?.apply(f))
    }

    /// Operator absolute value `|w| = (w* w)^(1/2)`.
    pub fn abs_op(&self) -> Result<HermitianMatrix> {
        self.func_calc(f64::abs)
    }

    /// Positive part `u⁺ = ½(|u| + u)`.
    pub fn pos_part(&self) -> Result<HermitianMatrix> {
        self.func_calc(|x| x.max(0.0))
    }

    /// Negative part `u⁻ = ½(|u| - u)`.
    pub fn neg_part(&self) -> Result<HermitianMatrix> {
        self.func_calc(|x| (-x).max(0.0))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues[0])
    }

    /// `true` iff `min eigenvalue >= -tol * n * max(1, ‖H‖_op)`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let eig = self.eig()?;
        let scale = eig.op_norm().max(1.0);
        Ok(eig.eigenvalues[0] >= -tol * self.dim() as f64 * scale)
    }

    /// Operator norm (largest |eigenvalue|).
    pub fn op_norm(&self) -> Result<f64> {
        Ok(self.eig()?.op_norm())
    }

    /// Inverse through the spectral calculus. Requires
    /// `min |eigenvalue| > tol`.
    pub fn inverse(&self, tol: f64) -> Result<HermitianMatrix> {
        let eig = self.eig()?;
        let min_abs = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &l| m.min(l.abs()));
        if min_abs <= tol {
            return Err(Error::Singular { min_abs_eigenvalue: min_abs });
        }
        Ok(eig.apply(|x| 1.0 / x))
    }

    /// PSD square root. Eigenvalues in `[-tol-scaled, 0)` are clamped to 0;
    /// anything lower is an error.
    pub fn sqrt_psd(&self, tol: f64) -> Result<HermitianMatrix> {
        let eig = self.eig()?;
        let scale = eig.op_norm().max(1.0);
        let floor = -tol * self.dim() as f64 * scale;
        if eig.eigenvalues[0] < floor {
            return Err(Error::NotPsd { min_eigenvalue: eig.eigenvalues[0] });
        }
        Ok(eig.apply(|x| x.max(0.0).sqrt()))
    }

    /// `‖self - other‖_op <= tol`.
    pub fn approx_eq(&self, other: &HermitianMatrix, tol: f64) -> Result<bool> {
        check_dims(self.dim(), other.dim())?;
        Ok((self - other).op_norm()? <= tol)
    }
}

impl std::ops::Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        // Sums of exactly Hermitian matrices are exactly Hermitian in
        // floating point; no re-symmetrization needed.
        HermitianMatrix { matrix: &self.matrix + &rhs.matrix }
    }
}

impl std::ops::Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { matrix: &self.matrix - &rhs.matrix }
    }
}

impl std::ops::Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix { matrix: -&self.matrix }
    }
}

impl std::ops::Mul for &HermitianMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &HermitianMatrix) -> ComplexMatrix {
        &self.matrix * &rhs.matrix
    }
}

/// Eigensystem of a Hermitian matrix: eigenvalues ascending, eigenvector
/// columns unitary.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn op_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, &l| m.max(l.abs()))
    }

    /// `U diag(f(λ_i)) U*`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.eigenvectors.inner;
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i == j { C64::new(f(self.eigenvalues[i]), 0.0) } else { C64::new(0.0, 0.0) }
        });
        HermitianMatrix::symmetrize(ComplexMatrix { inner: u * d * u.adjoint() })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|x| x)
    }

    /// `‖U*U - I‖_op`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let gram = self.eigenvectors.inner.adjoint() * &self.eigenvectors.inner;
        ComplexMatrix { inner: gram - DMatrix::<C64>::identity(n, n) }.op_norm()
    }

    /// Columns of the eigenvector matrix whose eigenvalue satisfies `pred`,
    /// as an n×k matrix.
    pub(crate) fn eigenbasis_where(&self, pred: impl Fn(f64) -> bool) -> DMatrix<C64> {
        let n = self.dim();
        let cols: Vec<usize> =
            (0..n).filter(|&i| pred(self.eigenvalues[i])).collect();
        let mut m = DMatrix::<C64>::zeros(n, cols.len());
        for (dst, &src) in cols.iter().enumerate() {
            m.set_column(dst, &self.eigenvectors.inner.column(src));
        }
        m
    }
}
