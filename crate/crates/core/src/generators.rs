//! Deterministic, seeded constructors for every class of pair the crate
//! decides: the oracle side of all property suites.
//!
//! Identical seeds reproduce identical output on one platform. Batch runs
//! shard by handing disjoint seeds to independent calls.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch::{BlochPoint, CENTRE, RADIUS};
use crate::effects::{Effect, Projection};
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianMatrix};
use crate::structure::{build_x0_pair, X0NormalForm};
use crate::tol::ToleranceConfig;

/// Seed of the deterministic generator stream.
pub type Seed = u64;

/// Margin keeping every generated "strict" spectrum inside
/// `[STRICT_MARGIN, 1 - STRICT_MARGIN]`, away from tolerance boundaries.
pub const STRICT_MARGIN: f64 = 1e-3;

/// Angle margin for the two-block projection forms; keeps the block
/// cosines/sines (and with them the assembled spectra) clear of 0 and 1.
const ANGLE_LO: f64 = 0.25;
const ANGLE_SEP: f64 = 0.15;

fn rng_for(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn haar_unitary_with(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = DMatrix::<C64>::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    // Fix the QR gauge: rotate each column by the phase of the matching
    // diagonal entry of R, which makes the distribution Haar.
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_inner(q)
}

fn conjugate(u: &ComplexMatrix, h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(ComplexMatrix::from_inner(
        u.inner() * h.as_matrix().inner() * u.inner().adjoint(),
    ))
}

/// Haar-distributed unitary (QR of a complex Gaussian matrix with the
/// R-diagonal phase correction).
pub fn rand_unitary(n: usize, seed: Seed) -> ComplexMatrix {
    haar_unitary_with(&mut rng_for(seed), n)
}

/// `U diag(uniform[0,1]) U*` with Haar `U`.
pub fn rand_effect(n: usize, seed: Seed) -> Effect {
    let mut rng = rng_for(seed);
    let u = haar_unitary_with(&mut rng, n);
    let spectrum: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let m = conjugate(&u, &HermitianMatrix::diagonal(&spectrum));
    Effect::validate(m, &ToleranceConfig::default()).expect("generated effect is valid")
}

/// Effect with spectrum uniform in `[STRICT_MARGIN, 1 - STRICT_MARGIN]`.
pub fn rand_strict_effect(n: usize, seed: Seed) -> Effect {
    let mut rng = rng_for(seed);
    let u = haar_unitary_with(&mut rng, n);
    let spectrum: Vec<f64> =
        (0..n).map(|_| STRICT_MARGIN + (1.0 - 2.0 * STRICT_MARGIN) * rng.gen::<f64>()).collect();
    let m = conjugate(&u, &HermitianMatrix::diagonal(&spectrum));
    Effect::validate(m, &ToleranceConfig::default()).expect("generated effect is valid")
}

/// Haar-conjugated rank-`rank` projection.
pub fn rand_projection(n: usize, rank: usize, seed: Seed) -> Result<Projection> {
    if rank > n {
        return Err(Error::invalid(format!("rank {rank} exceeds dimension {n}")));
    }
    if rank == 0 {
        return Ok(Projection::zero(n));
    }
    if rank == n {
        return Ok(Projection::identity(n));
    }
    let mut rng = rng_for(seed);
    let u = haar_unitary_with(&mut rng, n);
    let spectrum: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    let m = conjugate(&u, &HermitianMatrix::diagonal(&spectrum));
    Projection::validate(m, &ToleranceConfig::default())
}

/// Two effects diagonal in one Haar-random basis; they commute to rounding.
pub fn rand_commuting_pair(n: usize, seed: Seed) -> (Effect, Effect) {
    let mut rng = rng_for(seed);
    let u = haar_unitary_with(&mut rng, n);
    let s1: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let s2: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let tol = ToleranceConfig::default();
    let a = Effect::validate(conjugate(&u, &HermitianMatrix::diagonal(&s1)), &tol)
        .expect("generated effect is valid");
    let b = Effect::validate(conjugate(&u, &HermitianMatrix::diagonal(&s2)), &tol)
        .expect("generated effect is valid");
    (a, b)
}

/// Parameters of the diagonal two-block normal form over k angles:
/// `p₁ = diag(cos θ)`, `p₂ = diag(sin θ)` (so `p₁² + p₂² = I` exactly), a
/// strict diagonal weight `x`, and the ambient unitary.
#[derive(Debug, Clone)]
pub struct M2NormalFormParams {
    pub k: usize,
    pub theta: Vec<f64>,
    pub x: Vec<f64>,
    pub unitary: ComplexMatrix,
}

impl M2NormalFormParams {
    /// The two `2k x 2k` projections of the form: `P` from the angles and
    /// its complement, in the unrotated block basis.
    fn block_projection(&self) -> DMatrix<C64> {
        let k = self.k;
        let mut p = DMatrix::<C64>::zeros(2 * k, 2 * k);
        for i in 0..k {
            let (s, c) = self.theta[i].sin_cos();
            p[(i, i)] = C64::new(c * c, 0.0);
            p[(i, k + i)] = C64::new(c * s, 0.0);
            p[(k + i, i)] = C64::new(c * s, 0.0);
            p[(k + i, k + i)] = C64::new(s * s, 0.0);
        }
        p
    }
}

/// Assembles the absolutely compatible strict pair encoded by the
/// parameters: `A = ((I-x) ⊗ I₂) P₀ + (x ⊗ I₂) P` and the partner with the
/// complementary projection, conjugated by the ambient unitary.
pub fn abs_compat_pair_from_params(
    params: &M2NormalFormParams,
    tol: &ToleranceConfig,
) -> Result<(Effect, Effect)> {
    let k = params.k;
    if k == 0 {
        return Err(Error::invalid("block dimension k must be at least 1"));
    }
    if params.theta.len() != k || params.x.len() != k {
        return Err(Error::invalid(format!(
            "expected {k} angles and weights, got {} and {}",
            params.theta.len(),
            params.x.len()
        )));
    }
    if params.unitary.dim() != 2 * k {
        return Err(Error::DimMismatch { left: params.unitary.dim(), right: 2 * k });
    }
    for &x in &params.x {
        if !(STRICT_MARGIN..=1.0 - STRICT_MARGIN).contains(&x) {
            return Err(Error::invalid(format!(
                "weight {x} violates the strictness margin {STRICT_MARGIN}"
            )));
        }
    }
    for &t in &params.theta {
        let (s, c) = t.sin_cos();
        if s * s < STRICT_MARGIN || c * c < STRICT_MARGIN {
            return Err(Error::invalid(format!(
                "angle {t} puts the block projection outside the strictness margin"
            )));
        }
    }

    let n = 2 * k;
    let p = params.block_projection();
    let p_comp = DMatrix::<C64>::identity(n, n) - &p;
    let mut a = DMatrix::<C64>::zeros(n, n);
    let mut b = DMatrix::<C64>::zeros(n, n);
    for i in 0..k {
        let x = C64::new(params.x[i], 0.0);
        let rest = C64::new(1.0 - params.x[i], 0.0);
        for j in 0..n {
            a[(i, j)] += x * p[(i, j)];
            a[(k + i, j)] += x * p[(k + i, j)];
            b[(i, j)] += x * p_comp[(i, j)];
            b[(k + i, j)] += x * p_comp[(k + i, j)];
        }
        // ((I - x) ⊗ I₂) P₀ adds (1 - x_i) on the second-copy diagonal.
        a[(k + i, k + i)] += rest;
        b[(k + i, k + i)] += rest;
    }

    let u = &params.unitary;
    let ah = conjugate(u, &HermitianMatrix::new(ComplexMatrix::from_inner(a), 1e-12)?);
    let bh = conjugate(u, &HermitianMatrix::new(ComplexMatrix::from_inner(b), 1e-12)?);
    Ok((Effect::validate(ah, tol)?, Effect::validate(bh, tol)?))
}

/// Random absolutely compatible strict pair on `ℂ^{2k}`, with its
/// generating parameters.
pub fn rand_abs_compat_strict_pair(
    k: usize,
    seed: Seed,
    tol: &ToleranceConfig,
) -> Result<(Effect, Effect, M2NormalFormParams)> {
    let mut rng = rng_for(seed);
    let theta: Vec<f64> = (0..k)
        .map(|_| ANGLE_LO + (std::f64::consts::FRAC_PI_2 - 2.0 * ANGLE_LO) * rng.gen::<f64>())
        .collect();
    let x: Vec<f64> = (0..k).map(|_| 0.05 + 0.9 * rng.gen::<f64>()).collect();
    let unitary = haar_unitary_with(&mut rng, 2 * k);
    let params = M2NormalFormParams { k, theta, x, unitary };
    let (a, b) = abs_compat_pair_from_params(&params, tol)?;
    Ok((a, b, params))
}

/// Random x₀-compatible, x₀-strict pair on `ℂ^{2k}` together with the
/// normal form that generated it (already rotated into the ambient basis).
///
/// The central weight splits `I - x₀` into two strict central pieces, and
/// the two projections are independent strict two-block forms with an angle
/// separation that keeps the shifted pair strict.
pub fn rand_x0_pair(
    k: usize,
    seed: Seed,
    tol: &ToleranceConfig,
) -> Result<(Effect, Effect, X0NormalForm)> {
    if k == 0 {
        return Err(Error::invalid("block dimension k must be at least 1"));
    }
    let mut rng = rng_for(seed);
    let n = 2 * k;

    let z0: Vec<f64> = (0..k).map(|_| 0.8 * rng.gen::<f64>()).collect();
    let frac: Vec<f64> = (0..k).map(|_| 0.1 + 0.8 * rng.gen::<f64>()).collect();
    let theta: Vec<f64> = (0..k)
        .map(|_| ANGLE_LO + (std::f64::consts::FRAC_PI_2 - 2.0 * ANGLE_LO) * rng.gen::<f64>())
        .collect();
    let phi: Vec<f64> = theta
        .iter()
        .map(|&t| loop {
            let c = ANGLE_LO + (std::f64::consts::FRAC_PI_2 - 2.0 * ANGLE_LO) * rng.gen::<f64>();
            if (c - t).abs() >= ANGLE_SEP {
                break c;
            }
        })
        .collect();

    let dup = |v: &[f64]| -> Vec<f64> {
        let mut d = v.to_vec();
        d.extend_from_slice(v);
        d
    };
    let x0_blk = HermitianMatrix::diagonal(&dup(&z0));
    let w1_diag: Vec<f64> = (0..k).map(|i| (1.0 - z0[i]) * frac[i]).collect();
    let w2_diag: Vec<f64> = (0..k).map(|i| (1.0 - z0[i]) * (1.0 - frac[i])).collect();
    let w1_blk = HermitianMatrix::diagonal(&dup(&w1_diag));
    let w2_blk = HermitianMatrix::diagonal(&dup(&w2_diag));

    let p_blk = M2NormalFormParams {
        k,
        theta,
        x: vec![0.5; k],
        unitary: ComplexMatrix::identity(n),
    }
    .block_projection();
    let q_blk = M2NormalFormParams {
        k,
        theta: phi,
        x: vec![0.5; k],
        unitary: ComplexMatrix::identity(n),
    }
    .block_projection();

    let u = haar_unitary_with(&mut rng, n);
    let herm = |m: DMatrix<C64>| HermitianMatrix::symmetrize(ComplexMatrix::from_inner(m));
    let form = X0NormalForm {
        x0: conjugate(&u, &x0_blk),
        c: HermitianMatrix::identity(n).scale(0.5),
        w1: conjugate(&u, &w1_blk),
        w2: conjugate(&u, &w2_blk),
        p: Projection::validate(conjugate(&u, &herm(p_blk)), tol)?,
        q: Projection::validate(conjugate(&u, &herm(q_blk)), tol)?,
    };
    let (a, b) = build_x0_pair(&form, tol)?;
    Ok((a, b, form))
}

/// Absolutely compatible pair with a populated block structure: a direct sum
/// of scalar-compatible commuting entries (one eigenvalue of each joint pair
/// pinned to 0 or 1, which is exactly scalar absolute compatibility) and a
/// strict two-block part, conjugated by a Haar unitary.
///
/// The commuting entries feed the four trivial blocks of the six-block
/// decomposition and the strict part its coupled corner.
pub fn rand_mixed_abs_compat_pair(
    seed: Seed,
    tol: &ToleranceConfig,
) -> Result<(Effect, Effect)> {
    let mut rng = rng_for(seed);
    let n_comm = rng.gen_range(0..=4usize);
    let k = rng.gen_range(0..=3usize);
    let (n_comm, k) = if n_comm == 0 && k == 0 { (2, 1) } else { (n_comm, k) };

    let mut d1: Vec<f64> = Vec::with_capacity(n_comm);
    let mut d2: Vec<f64> = Vec::with_capacity(n_comm);
    for _ in 0..n_comm {
        let interior = 0.05 + 0.9 * rng.gen::<f64>();
        let pinned = if rng.gen::<bool>() { 1.0 } else { 0.0 };
        if rng.gen::<bool>() {
            d1.push(pinned);
            d2.push(interior);
        } else {
            d1.push(interior);
            d2.push(pinned);
        }
    }

    let n = n_comm + 2 * k;
    let mut a = DMatrix::<C64>::zeros(n, n);
    let mut b = DMatrix::<C64>::zeros(n, n);
    for i in 0..n_comm {
        a[(i, i)] = C64::new(d1[i], 0.0);
        b[(i, i)] = C64::new(d2[i], 0.0);
    }
    if k > 0 {
        let (sa, sb, _) = rand_abs_compat_strict_pair(k, rng.gen::<u64>(), tol)?;
        a.view_mut((n_comm, n_comm), (2 * k, 2 * k))
            .copy_from(sa.matrix().as_matrix().inner());
        b.view_mut((n_comm, n_comm), (2 * k, 2 * k))
            .copy_from(sb.matrix().as_matrix().inner());
    }

    let u = haar_unitary_with(&mut rng, n);
    let ah = conjugate(&u, &HermitianMatrix::symmetrize(ComplexMatrix::from_inner(a)));
    let bh = conjugate(&u, &HermitianMatrix::symmetrize(ComplexMatrix::from_inner(b)));
    Ok((Effect::validate(ah, tol)?, Effect::validate(bh, tol)?))
}

/// Rejection-samples a pair of interior points whose diameter ball sits
/// strictly inside the Bloch ball, with margins keeping λ inside
/// `[2·margin, 1 - margin]`.
pub fn rand_internal_couple(seed: Seed) -> (BlochPoint, BlochPoint) {
    let mut rng = rng_for(seed);
    let sample_point = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen::<f64>() - 0.5;
        let y = rng.gen::<f64>() - 0.5;
        let z = rng.gen::<f64>() - 0.5;
        if x * x + y * y + z * z < RADIUS * RADIUS {
            return BlochPoint::new(CENTRE.x + x, CENTRE.y + y, CENTRE.z + z);
        }
    };
    loop {
        let a = sample_point(&mut rng);
        let b = sample_point(&mut rng);
        let sep = a.dist(b);
        let m = BlochPoint::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z));
        if sep > 2.0 * STRICT_MARGIN && m.dist(CENTRE) + 0.5 * sep < RADIUS - STRICT_MARGIN {
            return (a, b);
        }
    }
}

/// A partially ortho-coexistent instance built the forward way: a triple
/// `(x, y, z)` with `y z = 0` and `x + y + z <= I`, plus the pair it
/// witnesses. The oracle side of the uniqueness suite.
#[derive(Debug, Clone)]
pub struct OrthoTripleInstance {
    pub x: Effect,
    pub y: Effect,
    pub z: Effect,
    pub a: Effect,
    pub b: Effect,
}

pub fn rand_ortho_triple(n: usize, seed: Seed, tol: &ToleranceConfig) -> Result<OrthoTripleInstance> {
    let mut rng = rng_for(seed);
    let u_mat = {
        let g = DMatrix::<C64>::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
        HermitianMatrix::symmetrize(ComplexMatrix::from_inner(g))
    };
    // y and z from the two sign parts of a random Hermitian, scaled to
    // leave room for x.
    let scale_target = 0.3 + 0.6 * rng.gen::<f64>();
    let norm = u_mat.op_norm()?;
    let sigma = if norm > 0.0 { scale_target / norm } else { 0.0 };
    let y = u_mat.pos_part()?.scale(sigma);
    let z = u_mat.neg_part()?.scale(sigma);

    let room = (&HermitianMatrix::identity(n) - &(&y + &z)).sqrt_psd(tol.tau_psd)?;
    let e = rand_effect(n, rng.gen::<u64>());
    let x = HermitianMatrix::symmetrize(ComplexMatrix::from_inner(
        room.as_matrix().inner() * e.matrix().as_matrix().inner() * room.as_matrix().inner(),
    ));

    let a = Effect::validate(&x + &y, tol)?;
    let b = Effect::validate(&x + &z, tol)?;
    Ok(OrthoTripleInstance {
        x: Effect::validate(x, tol)?,
        y: Effect::validate(y, tol)?,
        z: Effect::validate(z, tol)?,
        a,
        b,
    })
}
