//! Structure-theorem algorithms: the central normal form of an x₀-compatible
//! strict pair, the two-block form of a strict absolutely compatible pair,
//! and the six-block decomposition of a general absolutely compatible pair.

use nalgebra::DMatrix;

use crate::algebra::is_in_centre;
use crate::compatibility::{compat_defect, is_x0_compatible, is_x0_strict_pair};
use crate::effects::{Effect, Projection};
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianMatrix};
use crate::tol::ToleranceConfig;

/// The central normal form `a = x₀ c + w₁ p + w₂ q`,
/// `b = x₀ c + w₁ p + w₂ q'` with `w₁ + w₂ = I - x₀` and `c = ½ I`.
#[derive(Debug, Clone)]
pub struct X0NormalForm {
    /// Central PSD defect with norm < 1.
    pub x0: HermitianMatrix,
    /// `½ I` on the ambient space.
    pub c: HermitianMatrix,
    /// `|I - a - b|`; central, strictly positive.
    pub w1: HermitianMatrix,
    /// `|a - b|`; central, strictly positive.
    pub w2: HermitianMatrix,
    pub p: Projection,
    pub q: Projection,
}

impl X0NormalForm {
    /// `(a, b)` assembled from the parameters.
    pub fn assemble(&self) -> (HermitianMatrix, HermitianMatrix) {
        let base = &HermitianMatrix::symmetrize(&self.x0 * &self.c)
            + &HermitianMatrix::symmetrize(&self.w1 * self.p.matrix());
        let a = &base + &HermitianMatrix::symmetrize(&self.w2 * self.q.matrix());
        let b = &base + &HermitianMatrix::symmetrize(&self.w2 * self.q.complement().matrix());
        (a, b)
    }

    /// Max residual over the normal-form identities against a target pair:
    /// the weight split `w₁ + w₂ = I - x₀` and both reassembly equations.
    pub fn max_residual(&self, a: &Effect, b: &Effect) -> Result<f64> {
        let n = self.x0.dim();
        let id = HermitianMatrix::identity(n);
        let split = (&(&self.w1 + &self.w2) - &(&id - &self.x0)).op_norm()?;
        let (ra, rb) = self.assemble();
        let res_a = (&ra - a.matrix()).op_norm()?;
        let res_b = (&rb - b.matrix()).op_norm()?;
        Ok(split.max(res_a).max(res_b))
    }
}

/// Recovery of the central normal form from an x₀-compatible, x₀-strict pair.
///
/// `w₂ = |a-b|` and `w₁ = |I-a-b|` are invertible exactly for x₀-strict
/// pairs, and the projections come out of the sign decompositions
/// `a - b = w₂(q - q')` and `I - a - b = w₁(p' - p)`. The `q` vs `q'` sign
/// convention is fixed by `tr(q (a-b)) >= 0`, which the formula below
/// satisfies automatically.
pub fn recover_x0_normal_form(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<X0NormalForm> {
    let report = is_x0_compatible(a, b, tol)?;
    if !report.x0_compatible {
        return Err(Error::NotX0Compatible {
            reason: format!(
                "defect norm {:.3e}, psd {}, central {}",
                report.defect_norm, report.defect_psd, report.defect_central
            ),
        });
    }
    let n = a.dim();
    let id = HermitianMatrix::identity(n);
    let diff = a.matrix() - b.matrix();
    let co = &(&id - a.matrix()) - b.matrix();
    let w2 = diff.abs_op()?;
    let w1 = co.abs_op()?;

    let w2_min = w2.min_eigenvalue()?;
    if w2_min <= tol.tau_strict {
        return Err(Error::NotX0Strict { which: "|a-b|", min_eigenvalue: w2_min });
    }
    let w1_min = w1.min_eigenvalue()?;
    if w1_min <= tol.tau_strict {
        return Err(Error::NotX0Strict { which: "|I-a-b|", min_eigenvalue: w1_min });
    }

    let half = 0.5;
    let q_raw = (&id + &HermitianMatrix::symmetrize(&w2.inverse(tol.tau_psd)? * &diff)).scale(half);
    let p_raw = (&id - &HermitianMatrix::symmetrize(&w1.inverse(tol.tau_psd)? * &co)).scale(half);
    let q = Projection::validate(q_raw, tol)?;
    let p = Projection::validate(p_raw, tol)?;

    let form = X0NormalForm { x0: report.defect, c: id.scale(0.5), w1, w2, p, q };

    let residual = form.max_residual(a, b)?;
    let bound = tol.eq_scaled(n, 1.0) * 10.0;
    if residual > bound {
        return Err(Error::invalid(format!(
            "normal-form reassembly residual {residual:.3e} exceeds {bound:.3e}"
        )));
    }
    if !is_in_centre(&form.w1, a, b, tol)? || !is_in_centre(&form.w2, a, b, tol)? {
        return Err(Error::invalid("recovered weights are not central".to_string()));
    }
    Ok(form)
}

/// Converse direction: assembles `(a, b)` from normal-form parameters and
/// validates that the result is an x₀-compatible, x₀-strict pair of effects
/// with defect `x₀`.
pub fn build_x0_pair(form: &X0NormalForm, tol: &ToleranceConfig) -> Result<(Effect, Effect)> {
    let n = form.x0.dim();
    let norm = form.x0.op_norm()?;
    if norm >= 1.0 - tol.tau_strict {
        return Err(Error::invalid(format!("‖x0‖ = {norm} is not < 1")));
    }
    if !form.x0.is_psd(tol.tau_psd)? {
        return Err(Error::invalid("x0 is not PSD".to_string()));
    }
    for (name, w) in [("w1", &form.w1), ("w2", &form.w2)] {
        let min = w.min_eigenvalue()?;
        if min <= tol.tau_strict {
            return Err(Error::invalid(format!(
                "{name} is not strictly positive (min eigenvalue {min:.3e})"
            )));
        }
    }
    let split = (&(&form.w1 + &form.w2) - &(&HermitianMatrix::identity(n) - &form.x0)).op_norm()?;
    if split > tol.eq_scaled(n, 1.0) {
        return Err(Error::invalid(format!("w1 + w2 != I - x0 (residual {split:.3e})")));
    }

    let (ra, rb) = form.assemble();
    let a = Effect::validate(ra, tol)?;
    let b = Effect::validate(rb, tol)?;

    let defect_residual = (&compat_defect(&a, &b)? - &form.x0).op_norm()?;
    if defect_residual > tol.eq_scaled(n, 1.0) * 10.0 {
        return Err(Error::invalid(format!(
            "assembled pair has defect residual {defect_residual:.3e}; weights likely fail centrality"
        )));
    }
    if !is_x0_strict_pair(&a, &b, &form.x0, tol)? {
        return Err(Error::invalid("assembled pair is not x0-strict".to_string()));
    }
    Ok((a, b))
}

/// The two-block form of a strict absolutely compatible pair: a unitary onto
/// `pH ⊕ pH` under which `a = [[a₀², a₀b₀], [a₀b₀, I - a₀²]]` and
/// `b = [[b₀², -a₀b₀], [-a₀b₀, I - b₀²]]` with commuting strict `a₀, b₀`.
#[derive(Debug, Clone)]
pub struct StrictPairNormalForm {
    pub block_dim: usize,
    pub a0: Effect,
    pub b0: Effect,
    /// Unitary `H -> pH ⊕ pH`, stored as the n×n matrix whose first
    /// `block_dim` rows span the lower block of `a + b`.
    pub basis_unitary: ComplexMatrix,
}

impl StrictPairNormalForm {
    /// The represented pair `U* Â U`, `U* B̂ U`.
    pub fn reassemble(&self) -> (HermitianMatrix, HermitianMatrix) {
        let k = self.block_dim;
        let n = 2 * k;
        let a0 = self.a0.matrix().as_matrix().inner();
        let b0 = self.b0.matrix().as_matrix().inner();
        let a0sq = a0 * a0;
        let b0sq = b0 * b0;
        let cross = a0 * b0;
        let eye = DMatrix::<C64>::identity(k, k);

        let mut ahat = DMatrix::<C64>::zeros(n, n);
        let mut bhat = DMatrix::<C64>::zeros(n, n);
        ahat.view_mut((0, 0), (k, k)).copy_from(&a0sq);
        ahat.view_mut((0, k), (k, k)).copy_from(&cross);
        ahat.view_mut((k, 0), (k, k)).copy_from(&cross.adjoint());
        ahat.view_mut((k, k), (k, k)).copy_from(&(&eye - &a0sq));
        bhat.view_mut((0, 0), (k, k)).copy_from(&b0sq);
        bhat.view_mut((0, k), (k, k)).copy_from(&(-&cross));
        bhat.view_mut((k, 0), (k, k)).copy_from(&(-cross.adjoint()));
        bhat.view_mut((k, k), (k, k)).copy_from(&(&eye - &b0sq));

        let u = self.basis_unitary.inner();
        let a = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(u.adjoint() * ahat * u));
        let b = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(u.adjoint() * bhat * u));
        (a, b)
    }

    pub fn max_residual(&self, a: &Effect, b: &Effect) -> Result<f64> {
        let (ra, rb) = self.reassemble();
        let res_a = (&ra - a.matrix()).op_norm()?;
        let res_b = (&rb - b.matrix()).op_norm()?;
        let comm = self
            .a0
            .matrix()
            .as_matrix()
            .commutator(self.b0.matrix().as_matrix())?
            .op_norm();
        Ok(res_a.max(res_b).max(comm))
    }
}

/// Splits the spectrum of `a + b` of a strict absolutely compatible pair at
/// one: below-one and above-one eigenbases. An eigenvalue within
/// `tau_strict` of one disqualifies the pair.
fn strict_pair_split(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let sum = a.matrix() + b.matrix();
    let eig = sum.eig()?;
    if let Some(&l) = eig.eigenvalues.iter().find(|&&l| (l - 1.0).abs() <= tol.tau_strict) {
        return Err(Error::NotStrictPair {
            detail: format!("a + b has eigenvalue {l} within tolerance of 1"),
        });
    }
    let lower = eig.eigenbasis_where(|l| l < 1.0);
    let upper = eig.eigenbasis_where(|l| l > 1.0);
    Ok((lower, upper))
}

/// Recovers the two-block form. Requires a strict absolutely compatible pair
/// on an even-dimensional space.
pub fn recover_strict_pair_form(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<StrictPairNormalForm> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    if !a.is_strict(tol) || !b.is_strict(tol) {
        return Err(Error::NotStrictPair { detail: "one of the effects is not strict".into() });
    }
    let defect_norm = compat_defect(a, b)?.op_norm()?;
    if defect_norm > tol.tau_eq * a.dim() as f64 {
        return Err(Error::NotStrictPair {
            detail: format!("pair is not absolutely compatible (defect norm {defect_norm:.3e})"),
        });
    }

    let (v1, v2) = strict_pair_split(a, b, tol)?;
    if v1.ncols() != v2.ncols() {
        return Err(Error::BlockDimMismatch { lower: v1.ncols(), upper: v2.ncols() });
    }
    let k = v1.ncols();
    let am = a.matrix().as_matrix().inner();
    let bm = b.matrix().as_matrix().inner();

    let a11 = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(v1.adjoint() * am * &v1));
    let b11 = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(v1.adjoint() * bm * &v1));
    let a0 = Effect::validate(a11.sqrt_psd(tol.tau_psd)?, tol)?;
    let b0 = Effect::validate(b11.sqrt_psd(tol.tau_psd)?, tol)?;

    // Align the upper block so the off-diagonal compression equals a₀b₀:
    // the cross block is (a₀b₀)·W for a unitary W, recovered as the polar
    // factor of the cross block.
    let cross = v1.adjoint() * am * &v2;
    let svd = cross.clone().svd(true, true);
    let w = svd.u.as_ref().expect("svd u") * svd.v_t.as_ref().expect("svd v_t");
    let v2_aligned = v2 * w.adjoint();

    // basis_unitary maps H to the two aligned copies: rows = [V1 | V2]†.
    let n = 2 * k;
    let mut cols = DMatrix::<C64>::zeros(n, n);
    cols.view_mut((0, 0), (n, k)).copy_from(&v1);
    cols.view_mut((0, k), (n, k)).copy_from(&v2_aligned);
    let basis_unitary = ComplexMatrix::from_inner(cols.adjoint());

    let form = StrictPairNormalForm { block_dim: k, a0, b0, basis_unitary };
    let residual = form.max_residual(a, b)?;
    let bound = tol.eq_scaled(n, 1.0) * 10.0;
    if residual > bound {
        return Err(Error::NotStrictPair {
            detail: format!("block reassembly residual {residual:.3e} exceeds {bound:.3e}"),
        });
    }
    Ok(form)
}

/// The six mutually orthogonal projections of an absolutely compatible pair,
/// in the paper's block order: `a` acts as the identity on the first, `b` on
/// the second; the third and fourth carry the coupled strict part; `b`
/// vanishes on the fifth and `a` on the sixth.
#[derive(Debug, Clone)]
pub struct SixBlockDecomposition {
    pub projections: [Projection; 6],
}

/// Residuals of every six-block identity, in check order.
#[derive(Debug, Clone)]
pub struct SixBlockVerification {
    pub passed: bool,
    pub checks: Vec<(String, f64)>,
}

impl SixBlockVerification {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, (_, r)| m.max(*r))
    }
}

/// Verifies a claimed decomposition: mutual orthogonality and completeness
/// of the projections, vanishing of every forbidden cross block, the fixed
/// diagonal blocks, `b₃₄ = -a₃₄`, and the three coupling relations (the
/// displayed-matrix version is checked for both `a` and `b`).
pub fn six_block_verification(
    a: &Effect,
    b: &Effect,
    d: &SixBlockDecomposition,
    tol: &ToleranceConfig,
) -> Result<SixBlockVerification> {
    let n = a.dim();
    let bound = tol.eq_scaled(n, 1.0);
    let mut checks: Vec<(String, f64)> = Vec::new();

    let pm: Vec<&HermitianMatrix> = d.projections.iter().map(|p| p.matrix()).collect();
    for i in 0..6 {
        for j in (i + 1)..6 {
            let r = (pm[i] * pm[j]).op_norm();
            checks.push((format!("p{} ⟂ p{}", i + 1, j + 1), r));
        }
    }
    let mut sum = HermitianMatrix::zeros(n);
    for p in &pm {
        sum = &sum + p;
    }
    checks.push(("sum = I".into(), (&sum - &HermitianMatrix::identity(n)).op_norm()?));

    let am = a.matrix();
    let bm = b.matrix();
    let block = |x: &HermitianMatrix, i: usize, j: usize| -> ComplexMatrix {
        ComplexMatrix::from_inner(
            pm[i].as_matrix().inner() * x.as_matrix().inner() * pm[j].as_matrix().inner(),
        )
    };

    for i in 0..6 {
        for j in 0..6 {
            if i == j || (i.min(j) == 2 && i.max(j) == 3) {
                continue;
            }
            checks.push((format!("a[{},{}] = 0", i + 1, j + 1), block(am, i, j).op_norm()));
            checks.push((format!("b[{},{}] = 0", i + 1, j + 1), block(bm, i, j).op_norm()));
        }
    }

    // Fixed diagonal blocks.
    checks.push(("a|p1 = p1".into(), (&HermitianMatrix::symmetrize(block(am, 0, 0)) - pm[0]).op_norm()?));
    checks.push(("b|p2 = p2".into(), (&HermitianMatrix::symmetrize(block(bm, 1, 1)) - pm[1]).op_norm()?));
    checks.push(("b|p5 = 0".into(), block(bm, 4, 4).op_norm()));
    checks.push(("a|p6 = 0".into(), block(am, 5, 5).op_norm()));

    // Coupled 3-4 corner.
    let a33 = block(am, 2, 2);
    let a44 = block(am, 3, 3);
    let b33 = block(bm, 2, 2);
    let b44 = block(bm, 3, 3);
    let a34 = block(am, 2, 3);
    let b34 = block(bm, 2, 3);
    checks.push(("b34 = -a34".into(), (&b34 + &a34).op_norm()));

    let p3 = pm[2].as_matrix();
    let rel_a = &(&a34 * &a34.adjoint()) - &(&(p3 - &a33) * &(p3 - &b33));
    checks.push(("a34 a34* = (p3-a33)(p3-b33)".into(), rel_a.op_norm()));

    let rel_b = &(&a34.adjoint() * &a34) - &(&a44 * &b44);
    checks.push(("a34* a34 = a44 b44".into(), rel_b.op_norm()));

    let rel_c_a = &(&a34 - &(&a33 * &a34)) - &(&a34 * &a44);
    checks.push(("a34 = a33 a34 + a34 a44".into(), rel_c_a.op_norm()));
    let rel_c_b = &(&b34 - &(&b33 * &b34)) - &(&b34 * &b44);
    checks.push(("b34 = b33 b34 + b34 b44".into(), rel_c_b.op_norm()));

    let passed = checks.iter().all(|(_, r)| *r <= bound);
    Ok(SixBlockVerification { passed, checks })
}

/// Boolean form of [`six_block_verification`].
pub fn six_block_verify(
    a: &Effect,
    b: &Effect,
    d: &SixBlockDecomposition,
    tol: &ToleranceConfig,
) -> Result<bool> {
    Ok(six_block_verification(a, b, d, tol)?.passed)
}

/// Removes the components of `w`'s columns lying in the given bases and
/// returns an orthonormal basis of what is left. In exact arithmetic the
/// singular values are zero or one, so the 0.5 cutoff is safe.
fn complement_within(w: &DMatrix<C64>, taken: &[&DMatrix<C64>]) -> DMatrix<C64> {
    if w.ncols() == 0 {
        return w.clone();
    }
    let mut r = w.clone();
    for v in taken {
        if v.ncols() > 0 {
            r -= *v * (v.adjoint() * &r);
        }
    }
    let svd = r.clone().svd(true, false);
    let u = svd.u.expect("svd u");
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > 0.5).collect();
    let mut out = DMatrix::<C64>::zeros(w.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &u.column(src));
    }
    out
}

/// Kernel-priority recovery of the six-block decomposition.
///
/// The eigenvalue-one space of `a` is taken first, then what is left of the
/// eigenvalue-one space of `b`, then the kernels of `b` and of `a`; vectors
/// lying in several kernels go to the earliest block, which makes the
/// decomposition deterministic. The remainder must compress to a strict
/// absolutely compatible pair, whose spectrum split above/below one yields
/// `p₃` and `p₄`.
pub fn six_block_recover(
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<SixBlockDecomposition> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let defect_norm = compat_defect(a, b)?.op_norm()?;
    if defect_norm > tol.tau_eq * a.dim() as f64 {
        return Err(Error::NotAbsCompatible { defect_norm });
    }
    let n = a.dim();
    let near = tol.tau_strict;

    let v1 = a.spectrum().eigenbasis_where(|l| l >= 1.0 - near);
    let v2 = complement_within(&b.spectrum().eigenbasis_where(|l| l >= 1.0 - near), &[&v1]);
    let v5 = complement_within(&b.spectrum().eigenbasis_where(|l| l <= near), &[&v1, &v2]);
    let v6 = complement_within(&a.spectrum().eigenbasis_where(|l| l <= near), &[&v1, &v2, &v5]);

    // Remainder: eigenvectors of the summed projector with eigenvalue ~0.
    let taken = v1.ncols() + v2.ncols() + v5.ncols() + v6.ncols();
    let vr = if taken == n {
        DMatrix::<C64>::zeros(n, 0)
    } else {
        let mut stack = DMatrix::<C64>::zeros(n, taken);
        let mut at = 0;
        for v in [&v1, &v2, &v5, &v6] {
            stack.view_mut((0, at), (n, v.ncols())).copy_from(v);
            at += v.ncols();
        }
        let psum = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(&stack * stack.adjoint()));
        psum.eig()?.eigenbasis_where(|l| l < 0.5)
    };

    let (v3, v4) = if vr.ncols() == 0 {
        (DMatrix::<C64>::zeros(n, 0), DMatrix::<C64>::zeros(n, 0))
    } else {
        let am = a.matrix().as_matrix().inner();
        let bm = b.matrix().as_matrix().inner();
        let ar = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(vr.adjoint() * am * &vr));
        let br = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(vr.adjoint() * bm * &vr));
        let ea = Effect::validate(ar, tol)
            .map_err(|_| Error::SixBlockRemainder { strict_residual: f64::NAN, defect_norm })?;
        let eb = Effect::validate(br, tol)
            .map_err(|_| Error::SixBlockRemainder { strict_residual: f64::NAN, defect_norm })?;
        let margin = |e: &Effect| {
            e.eigenvalues().iter().fold(f64::INFINITY, |m, &l| m.min(l.min(1.0 - l)))
        };
        let strict_margin = margin(&ea).min(margin(&eb));
        let rem_defect = compat_defect(&ea, &eb)?.op_norm()?;
        if strict_margin <= tol.tau_strict || rem_defect > tol.tau_eq * vr.ncols() as f64 * 10.0 {
            return Err(Error::SixBlockRemainder {
                strict_residual: strict_margin,
                defect_norm: rem_defect,
            });
        }
        let (lower, upper) = strict_pair_split(&ea, &eb, tol)?;
        if lower.ncols() != upper.ncols() {
            return Err(Error::BlockDimMismatch { lower: lower.ncols(), upper: upper.ncols() });
        }
        // p₃ carries the above-one part of the compressed sum: that is the
        // labelling under which the coupling relations hold.
        (&vr * upper, &vr * lower)
    };

    Ok(SixBlockDecomposition {
        projections: [
            Projection::from_orthonormal_columns(&v1),
            Projection::from_orthonormal_columns(&v2),
            Projection::from_orthonormal_columns(&v3),
            Projection::from_orthonormal_columns(&v4),
            Projection::from_orthonormal_columns(&v5),
            Projection::from_orthonormal_columns(&v6),
        ],
    })
}
