//! Finite-dimensional *-algebra machinery: commutants, bicommutants (the von
//! Neumann algebra generated by a pair) and centre membership.
//!
//! The commutant is computed as the null space of the stacked linear map
//! `X -> (G X - X G)` over the generators, with a singular-value threshold;
//! in finite dimension the double commutant is the generated algebra.

use nalgebra::DMatrix;

use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianMatrix};
use crate::tol::ToleranceConfig;

/// Orthonormal (Frobenius) basis of a *-closed unital subalgebra of `M_n`.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl AlgebraBasis {
    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension of the span.
    pub fn span_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Membership via orthogonal projection onto the span: residual
    /// `‖m - Σ <B_i, m> B_i‖_F <= tau_eq * max(1, ‖m‖_F)`.
    pub fn contains(&self, m: &ComplexMatrix, tol: &ToleranceConfig) -> bool {
        self.projection_residual(m) <= tol.tau_eq * m.frobenius_norm().max(1.0)
    }

    /// Frobenius norm of the component of `m` orthogonal to the span.
    pub fn projection_residual(&self, m: &ComplexMatrix) -> f64 {
        let mut rem = m.inner().clone();
        for b in &self.basis {
            let coeff = b.frobenius_inner(m);
            rem -= b.inner() * coeff;
        }
        rem.norm()
    }

    /// Same span test: equal dimensions and cross-containment of every basis
    /// element.
    pub fn span_equals(&self, other: &AlgebraBasis, tol: &ToleranceConfig) -> bool {
        self.span_dim() == other.span_dim()
            && self.basis.iter().all(|b| other.contains(b, tol))
            && other.basis.iter().all(|b| self.contains(b, tol))
    }
}

/// Orthonormal basis of `{X : X G = G X for all generators G}`.
pub fn commutant_basis(gens: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<AlgebraBasis> {
    if gens.is_empty() {
        return Err(Error::invalid("commutant requires at least one generator"));
    }
    let n = gens[0].dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::DimMismatch { left: n, right: g.dim() });
        }
    }
    let nn = n * n;
    let k = gens.len();

    // Stacked map: block g holds the matrix of X -> G X - X G in the
    // column-major vectorization.
    let mut stacked = DMatrix::<C64>::zeros(k * nn, nn);
    for (gi, g) in gens.iter().enumerate() {
        let gm = g.inner();
        let base = gi * nn;
        for j in 0..n {
            for i in 0..n {
                let row = base + j * n + i;
                // (G X)[i,j] takes X[m,j] with weight G[i,m].
                for m in 0..n {
                    stacked[(row, j * n + m)] += gm[(i, m)];
                }
                // (X G)[i,j] takes X[i,m] with weight G[m,j].
                for m in 0..n {
                    stacked[(row, m * n + i)] -= gm[(m, j)];
                }
            }
        }
    }

    let max_gen_norm = gens.iter().map(|g| g.op_norm()).fold(0.0_f64, f64::max);
    let cutoff = tol.tau_eig * n as f64 * max_gen_norm.max(1.0);

    let svd = stacked.svd(false, true);
    let v_t = svd.v_t.expect("svd requested v_t");
    let mut basis = Vec::new();
    for (idx, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= cutoff {
            let row = v_t.row(idx);
            let m = ComplexMatrix::from_fn(n, |i, j| row[j * n + i].conj());
            basis.push(m);
        }
    }
    // Right singular vectors of distinct index are orthonormal already.
    Ok(AlgebraBasis { dim: n, basis })
}

/// Basis of the von Neumann algebra generated by `a` and `b`: the double
/// commutant of the pair. Contains `a`, `b` and the identity in its span.
pub fn generated_algebra_basis(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<AlgebraBasis> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let first = commutant_basis(
        &[a.matrix().as_matrix().clone(), b.matrix().as_matrix().clone()],
        tol,
    )?;
    commutant_basis(&first.basis, tol)
}

/// Membership of `x0` in the centre of the von Neumann algebra generated by
/// `a` and `b`:
/// (i) `x0` commutes with `a` and `b` (so it lies in the commutant of the
///     pair), and
/// (ii) `x0` commutes with every element of that commutant (so it lies in
///     the bicommutant, which is the generated algebra).
pub fn is_in_centre(
    x0: &HermitianMatrix,
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let n = x0.dim();
    if a.dim() != n || b.dim() != n {
        return Err(Error::DimMismatch { left: n, right: a.dim().max(b.dim()) });
    }
    let x = x0.as_matrix();
    let scale = x0.op_norm()?.max(1.0);
    let eq = tol.eq_scaled(n, scale);
    if x.commutator(a.matrix().as_matrix())?.op_norm() > eq {
        return Ok(false);
    }
    if x.commutator(b.matrix().as_matrix())?.op_norm() > eq {
        return Ok(false);
    }
    let commutant = commutant_basis(
        &[a.matrix().as_matrix().clone(), b.matrix().as_matrix().clone()],
        tol,
    )?;
    for c in commutant.basis() {
        if x.commutator(c)?.op_norm() > eq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Worst commutator norm of `x0` against `a`, `b` and the commutant basis
/// of the pair: zero exactly when `x0` is central in the generated algebra.
pub fn centrality_residual(
    x0: &HermitianMatrix,
    a: &Effect,
    b: &Effect,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let x = x0.as_matrix();
    let mut worst = x.commutator(a.matrix().as_matrix())?.op_norm();
    worst = worst.max(x.commutator(b.matrix().as_matrix())?.op_norm());
    let commutant = commutant_basis(
        &[a.matrix().as_matrix().clone(), b.matrix().as_matrix().clone()],
        tol,
    )?;
    for c in commutant.basis() {
        worst = worst.max(x.commutator(c)?.op_norm());
    }
    Ok(worst)
}

/// Strictness relative to any von Neumann algebra containing the effect
/// coincides with global strictness in finite dimension: the extremal
/// sandwich projections are spectral projections of the effect, hence lie in
/// every von Neumann algebra containing it.
pub fn is_strict_in_algebra(v: &Effect, tol: &ToleranceConfig) -> bool {
    v.is_strict(tol)
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

    /// Brute-force oracle for the commutant dimension: real row reduction of
    /// the stacked commutation system, independent of the SVD route.
    fn commutant_dim_oracle(gens: &[ComplexMatrix]) -> usize {
        let n = gens[0].dim();
        let nn = n * n;
        // Real system: 2 k nn equations (re and im) in 2 nn unknowns
        // (re and im of each X entry, column-major).
        let rows = 2 * gens.len() * nn;
        let cols = 2 * nn;
        let mut m = vec![vec![0.0_f64; cols]; rows];
        for (gi, g) in gens.iter().enumerate() {
            for j in 0..n {
                for i in 0..n {
                    let eq = gi * nn + j * n + i;
                    let mut add = |col: usize, w: C64| {
                        // X[col] enters with complex weight w: expand into
                        // real and imaginary equations.
                        m[2 * eq][2 * col] += w.re;
                        m[2 * eq][2 * col + 1] -= w.im;
                        m[2 * eq + 1][2 * col] += w.im;
                        m[2 * eq + 1][2 * col + 1] += w.re;
                    };
                    for k in 0..n {
                        add(j * n + k, g.entry(i, k));
                    }
                    for k in 0..n {
                        add(k * n + i, -g.entry(k, j));
                    }
                }
            }
        }
        // Row reduction with partial pivoting.
        let mut rank = 0;
        let mut row = 0;
        for col in 0..cols {
            let mut piv = row;
            for r in row..rows {
                if m[r][col].abs() > m[piv][col].abs() {
                    piv = r;
                }
            }
            if m[piv][col].abs() < 1e-9 {
                continue;
            }
            m.swap(row, piv);
            let p = m[row][col];
            for r in 0..rows {
                if r != row && m[r][col].abs() > 0.0 {
                    let f = m[r][col] / p;
                    for c in col..cols {
                        m[r][c] -= f * m[row][c];
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        (cols - rank) / 2
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let basis = commutant_basis(&[ComplexMatrix::identity(2)], &tol()).unwrap();
        assert_eq!(basis.span_dim(), 4);
        assert_eq!(commutant_dim_oracle(&[ComplexMatrix::identity(2)]), 4);
    }

    #[test]
    fn commutant_of_rank_one_projection_is_diagonal() {
        let p = HermitianMatrix::diagonal(&[1.0, 0.0]).into_matrix();
        let basis = commutant_basis(&[p.clone()], &tol()).unwrap();
        assert_eq!(basis.span_dim(), 2);
        assert_eq!(commutant_dim_oracle(&[p.clone()]), 2);
        // Diagonal matrices are in the span; off-diagonal units are not.
        let diag = HermitianMatrix::diagonal(&[0.3, -0.7]).into_matrix();
        assert!(basis.contains(&diag, &tol()));
        let offdiag = ComplexMatrix::from_fn(2, |i, j| {
            if i == 0 && j == 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        assert!(!basis.contains(&offdiag, &tol()));
    }

    #[test]
    fn irreducible_pair_has_trivial_commutant() {
        let p = HermitianMatrix::diagonal(&[1.0, 0.0]).into_matrix();
        let q = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
            .unwrap()
            .into_matrix();
        let gens = [p, q];
        let basis = commutant_basis(&gens, &tol()).unwrap();
        assert_eq!(basis.span_dim(), 1);
        assert_eq!(commutant_dim_oracle(&gens), 1);
    }

    #[test]
    fn generated_algebra_examples() {
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        let alg = generated_algebra_basis(&half, &half, &tol()).unwrap();
        assert_eq!(alg.span_dim(), 1);

        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let b = eff(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let alg = generated_algebra_basis(&a, &b, &tol()).unwrap();
        assert_eq!(alg.span_dim(), 4);
        assert!(alg.contains(a.matrix().as_matrix(), &tol()));
        assert!(alg.contains(b.matrix().as_matrix(), &tol()));
        assert!(alg.contains(&ComplexMatrix::identity(2), &tol()));

        let c = Effect::validate(HermitianMatrix::diagonal(&[0.3, 0.8]), &tol()).unwrap();
        let d = Effect::validate(HermitianMatrix::diagonal(&[0.6, 0.2]), &tol()).unwrap();
        let alg = generated_algebra_basis(&c, &d, &tol()).unwrap();
        assert_eq!(alg.span_dim(), 2);
    }

    #[test]
    fn double_commutant_is_idempotent() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let b = Effect::validate(HermitianMatrix::diagonal(&[0.6, 0.2]), &tol()).unwrap();
        let alg = generated_algebra_basis(&a, &b, &tol()).unwrap();
        let twice = commutant_basis(
            &commutant_basis(alg.basis(), &tol()).unwrap().basis,
            &tol(),
        )
        .unwrap();
        assert!(alg.span_equals(&twice, &tol()));
    }

    #[test]
    fn centre_membership_examples() {
        let a = eff(&[&[0.25, 0.25], &[0.25, 0.75]]);
        let b = eff(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let scalar = HermitianMatrix::identity(2).scale(0.4);
        assert!(is_in_centre(&scalar, &a, &b, &tol()).unwrap());

        // diag(1,0) commutes with a = b = I/2 but is not in the generated
        // algebra (the commutant is all of M_2).
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        let d = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(!is_in_centre(&d, &half, &half, &tol()).unwrap());

        // For a commuting diagonal pair with distinct entries, a itself is
        // central in the generated (diagonal) algebra.
        let c = Effect::validate(HermitianMatrix::diagonal(&[0.3, 0.8]), &tol()).unwrap();
        let e = Effect::validate(HermitianMatrix::diagonal(&[0.6, 0.2]), &tol()).unwrap();
        assert!(is_in_centre(c.matrix(), &c, &e, &tol()).unwrap());
    }

    #[test]
    fn commutant_dim_matches_oracle_on_block_pair() {
        // 4x4 jointly diagonalizable pair with distinct joint eigenvalues:
        // commutant is the diagonal algebra, complex dimension 4.
        let a = HermitianMatrix::diagonal(&[0.1, 0.4, 0.6, 0.9]).into_matrix();
        let b = HermitianMatrix::diagonal(&[0.8, 0.2, 0.7, 0.3]).into_matrix();
        let gens = [a, b];
        let basis = commutant_basis(&gens, &tol()).unwrap();
        assert_eq!(basis.span_dim(), 4);
        assert_eq!(commutant_dim_oracle(&gens), 4);
    }

    #[test]
    fn strict_in_algebra_reduction() {
        let half = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert!(is_strict_in_algebra(&half, &tol()));
        let p = eff(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(!is_strict_in_algebra(&p, &tol()));
        let d = Effect::validate(HermitianMatrix::diagonal(&[0.1, 0.9]), &tol()).unwrap();
        assert!(is_strict_in_algebra(&d, &tol()));
    }

    #[test]
    fn scaling_lemma_strictness() {
        // v strict, x = g(v) in the commutant with ‖x‖ < 1:
        // (1-x)v and (1-x)(1-v) stay strict; planting an eigenvalue at 0 or
        // 1 in v breaks strictness of one factor.
        let v = Effect::validate(HermitianMatrix::diagonal(&[0.2, 0.5, 0.8]), &tol()).unwrap();
        let x = v.matrix().func_calc(|l| 0.9 * l * l).unwrap();
        let one_minus_x = &HermitianMatrix::identity(3) - &x;
        let prod = |lhs: &HermitianMatrix, rhs: &HermitianMatrix| {
            Effect::validate(HermitianMatrix::symmetrize(lhs * rhs), &tol()).unwrap()
        };
        assert!(is_strict_in_algebra(&prod(&one_minus_x, v.matrix()), &tol()));
        assert!(is_strict_in_algebra(&prod(&one_minus_x, v.complement().matrix()), &tol()));

        let w = Effect::validate(HermitianMatrix::diagonal(&[0.0, 0.5, 1.0]), &tol()).unwrap();
        let xw = w.matrix().func_calc(|l| 0.9 * l * l).unwrap();
        let one_minus_xw = &HermitianMatrix::identity(3) - &xw;
        let s1 = prod(&one_minus_xw, w.matrix());
        let s2 = prod(&one_minus_xw, w.complement().matrix());
        assert!(!is_strict_in_algebra(&s1, &tol()) || !is_strict_in_algebra(&s2, &tol()));
    }
}
