//! Qubit geometry: the Bloch (Poincaré) ball realization of scalar
//! compatibility.
//!
//! Trace-one Hermitian 2x2 matrices are identified with points of ℝ³ via
//! `[[a, α], [conj α, 1-a]] <-> (a, Re α, Im α)`; rank-one projections land on
//! the sphere of diameter one around `C₀ = (1/2, 0, 0)` and strict mixed
//! states in the punctured open ball. Two interior points whose diameter
//! sphere sits strictly inside the ball (an "internal couple") admit the
//! geometric construction below, which produces the compatibility scalar λ
//! and the projections P, Q realizing both matrices.

use crate::compatibility::{compat_defect, is_x0_compatible};
use crate::effects::Effect;
use crate::error::{Error, Result};
use crate::linalg::{C64, ComplexMatrix, HermitianMatrix};
use crate::tol::ToleranceConfig;

/// A point of the Bloch identification `(a, Re α, Im α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The ball centre, representing `½ I₂`.
pub const CENTRE: BlochPoint = BlochPoint { x: 0.5, y: 0.0, z: 0.0 };

/// Radius of the Bloch sphere (diameter one).
pub const RADIUS: f64 = 0.5;

impl BlochPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochPoint { x, y, z }
    }

    fn add(self, o: BlochPoint) -> BlochPoint {
        BlochPoint::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    fn sub(self, o: BlochPoint) -> BlochPoint {
        BlochPoint::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    fn scale(self, s: f64) -> BlochPoint {
        BlochPoint::new(s * self.x, s * self.y, s * self.z)
    }

    fn dot(self, o: BlochPoint) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn dist(self, o: BlochPoint) -> f64 {
        self.sub(o).norm()
    }

    fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    fn midpoint(self, o: BlochPoint) -> BlochPoint {
        self.add(o).scale(0.5)
    }

    /// Reflection through the ball centre; matrices satisfy `X' = I - X`.
    pub fn antipode(self) -> BlochPoint {
        CENTRE.scale(2.0).sub(self)
    }
}

/// Classification of a point relative to the Bloch sphere and the set of
/// strict mixed states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    /// On the sphere: a rank-one projection.
    OnSphere,
    /// Interior minus the centre: a strict mixed state with `0 < det < 1/4`.
    InS,
    Outside,
    /// The centre `C₀`, representing `½ I₂` (excluded from the set of
    /// internal-couple candidates).
    Centre,
}

/// `(a, Re α, Im α)` of a trace-one Hermitian 2x2 matrix.
pub fn to_bloch(e: &HermitianMatrix, tol: &ToleranceConfig) -> Result<BlochPoint> {
    if e.dim() != 2 {
        return Err(Error::NotTwoByTwo { dim: e.dim() });
    }
    let trace = e.trace();
    if (trace - 1.0).abs() > tol.tau_eq {
        return Err(Error::TraceNotOne { trace });
    }
    let alpha = e.entry(0, 1);
    Ok(BlochPoint::new(e.entry(0, 0).re, alpha.re, alpha.im))
}

/// Inverse of [`to_bloch`]: `[[x, y + iz], [y - iz, 1 - x]]`.
pub fn from_bloch(pt: BlochPoint) -> HermitianMatrix {
    let alpha = C64::new(pt.y, pt.z);
    let m = ComplexMatrix::from_rows(&[
        vec![C64::new(pt.x, 0.0), alpha],
        vec![alpha.conj(), C64::new(1.0 - pt.x, 0.0)],
    ])
    .expect("2x2 is square");
    HermitianMatrix::new(m, 0.0).expect("constructed Hermitian")
}

/// Determinant of the represented matrix: `1/4 - ‖pt - C₀‖²`.
pub fn bloch_det(pt: BlochPoint) -> f64 {
    0.25 - pt.dist(CENTRE).powi(2)
}

pub fn classify_point(pt: BlochPoint, tol: &ToleranceConfig) -> PointClass {
    if pt.dist(CENTRE) <= tol.tau_eq {
        return PointClass::Centre;
    }
    let det = bloch_det(pt);
    if det.abs() <= tol.tau_eq {
        PointClass::OnSphere
    } else if det > 0.0 {
        PointClass::InS
    } else {
        PointClass::Outside
    }
}

/// Exact criterion for the ball on diameter `ab` to lie strictly inside the
/// Bloch ball: `‖M - C₀‖ + ‖a - b‖/2 < 1/2`, with margin `tau_eq`;
/// borderline couples are rejected rather than misclassified.
pub fn is_internal_couple(a: BlochPoint, b: BlochPoint, tol: &ToleranceConfig) -> Result<bool> {
    if a.dist(b) <= tol.tau_eq {
        return Err(Error::DegenerateCouple);
    }
    let m = a.midpoint(b);
    Ok(m.dist(CENTRE) + 0.5 * a.dist(b) < RADIUS - tol.tau_eq)
}

/// All intermediate points and scalars of the internal-couple construction.
#[derive(Debug, Clone)]
pub struct InternalCoupleConstruction {
    pub a: BlochPoint,
    pub b: BlochPoint,
    /// Midpoint of `ab`.
    pub m: BlochPoint,
    /// Intersection of the diameter sphere with the axis, on the `P` side.
    pub m_bar: BlochPoint,
    /// The other axis intersection; base point of the inner sphere.
    pub m0: BlochPoint,
    /// Centre of the inner sphere on diameter `P M₀`.
    pub m1: BlochPoint,
    /// Second intersections of the lines `M₀A`, `M₀B` with the inner sphere.
    pub a1: BlochPoint,
    pub b1: BlochPoint,
    /// Axis poles: rank-one projections with `P' = I - P`.
    pub p: BlochPoint,
    pub p_prime: BlochPoint,
    /// The constructed projection pair with `Q' = I - Q`.
    pub q: BlochPoint,
    pub q_prime: BlochPoint,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `λ = 2α(1-β)`.
    pub lambda: f64,
    /// `μ₁ = 1 - α - α(1-β)`.
    pub mu1: f64,
    /// `μ₂ = αβ`.
    pub mu2: f64,
}

/// Separation below which a line through two construction points is treated
/// as degenerate and resolved by the documented antipode rules.
const GEOM_EPS: f64 = 1e-12;

/// Second intersection of the line from `origin` (a point on the sphere)
/// toward `toward` with the sphere `(centre, radius)`.
///
/// Uses the cancellation-free quadratic form `q = -(b + sign(b) sqrt(b²-4ac))/2`
/// and picks the root of larger magnitude (the near root is the origin
/// itself, at parameter ~0).
fn second_sphere_intersection(
    origin: BlochPoint,
    toward: BlochPoint,
    centre: BlochPoint,
    radius: f64,
) -> BlochPoint {
    let d = toward.sub(origin);
    let o = origin.sub(centre);
    let a = d.dot(d);
    let b = 2.0 * d.dot(o);
    let c = o.dot(o) - radius * radius;
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (t1, t2) = (if a != 0.0 { q / a } else { 0.0 }, if q != 0.0 { c / q } else { 0.0 });
    let t = if t1.abs() >= t2.abs() { t1 } else { t2 };
    origin.add(d.scale(t))
}

/// Runs the full geometric construction for an internal couple and returns
/// every intermediate together with `λ = 2α(1-β)`.
pub fn construct_lambda(
    a: BlochPoint,
    b: BlochPoint,
    tol: &ToleranceConfig,
) -> Result<InternalCoupleConstruction> {
    if !is_internal_couple(a, b, tol)? {
        let m = a.midpoint(b);
        let slack = m.dist(CENTRE) + 0.5 * a.dist(b) - RADIUS;
        return Err(Error::NotInternalCouple { slack });
    }

    let m = a.midpoint(b);
    // Axis direction: from the centre toward M; when M is the centre every
    // diameter through M works and the A-aligned one keeps the construction
    // planar and deterministic.
    let axis = if m.dist(CENTRE) > GEOM_EPS { m.sub(CENTRE) } else { a.sub(CENTRE) };
    let u = axis.scale(1.0 / axis.norm());

    let p = CENTRE.add(u.scale(RADIUS));
    let p_prime = CENTRE.sub(u.scale(RADIUS));
    let r0 = 0.5 * a.dist(b);
    let m_bar = m.add(u.scale(r0));
    let m0 = m.sub(u.scale(r0));
    let m1 = p.midpoint(m0);
    let inner_radius = 0.5 * p.dist(m0);

    // Second intersections with the inner sphere; a point coinciding with
    // M₀ (the collinear case) is resolved through the diameter property
    // A₁B₁ of the inner sphere.
    let a_deg = a.dist(m0) <= GEOM_EPS;
    let b_deg = b.dist(m0) <= GEOM_EPS;
    let (a1, b1) = match (a_deg, b_deg) {
        (false, false) => (
            second_sphere_intersection(m0, a, m1, inner_radius),
            second_sphere_intersection(m0, b, m1, inner_radius),
        ),
        (true, false) => {
            let b1 = second_sphere_intersection(m0, b, m1, inner_radius);
            (m1.scale(2.0).sub(b1), b1)
        }
        (false, true) => {
            let a1 = second_sphere_intersection(m0, a, m1, inner_radius);
            (a1, m1.scale(2.0).sub(a1))
        }
        (true, true) => return Err(Error::DegenerateCouple),
    };

    // Rays from P through A₁ and B₁ out to the Bloch sphere. A ray that
    // degenerates (A₁ = P) pairs with the antipode of the other side.
    let q = if a1.dist(p) > GEOM_EPS {
        second_sphere_intersection(p, a1, CENTRE, RADIUS)
    } else if b1.dist(p) > GEOM_EPS {
        second_sphere_intersection(p, b1, CENTRE, RADIUS).antipode()
    } else {
        p
    };
    let q_prime = if b1.dist(p) > GEOM_EPS {
        second_sphere_intersection(p, b1, CENTRE, RADIUS)
    } else {
        q.antipode()
    };

    let alpha = m0.dist(p);
    let beta = if a.dist(m0) >= b.dist(m0) {
        a.dist(m0) / a1.dist(m0)
    } else {
        b.dist(m0) / b1.dist(m0)
    };
    let gamma = if q.dist(p) > GEOM_EPS {
        a1.dist(p) / q.dist(p)
    } else if q_prime.dist(p) > GEOM_EPS {
        b1.dist(p) / q_prime.dist(p)
    } else {
        alpha
    };

    let lambda = 2.0 * alpha * (1.0 - beta);
    let mu1 = 1.0 - alpha - alpha * (1.0 - beta);
    let mu2 = alpha * beta;

    let cons = InternalCoupleConstruction {
        a,
        b,
        m,
        m_bar,
        m0,
        m1,
        a1,
        b1,
        p,
        p_prime,
        q,
        q_prime,
        alpha,
        beta,
        gamma,
        lambda,
        mu1,
        mu2,
    };
    cons.check_invariants(tol)?;
    Ok(cons)
}

impl InternalCoupleConstruction {
    fn check_invariants(&self, tol: &ToleranceConfig) -> Result<()> {
        let checks = [
            ("gamma = alpha", (self.gamma - self.alpha).abs()),
            ("lambda/2 = dist(P, Mbar)", (0.5 * self.lambda - self.p.dist(self.m_bar)).abs()),
            ("Q' is the antipode of Q", self.q_prime.dist(self.q.antipode())),
        ];
        for (what, residual) in checks {
            if residual > tol.tau_eq {
                return Err(Error::invalid(format!(
                    "construction invariant violated: {what} (residual {residual:.3e})"
                )));
            }
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(Error::invalid(format!(
                "lambda = {} outside [0, 1)",
                self.lambda
            )));
        }
        Ok(())
    }

    /// The represented matrices of the four named projective points.
    pub fn matrices(&self) -> (HermitianMatrix, HermitianMatrix, HermitianMatrix, HermitianMatrix) {
        (from_bloch(self.p), from_bloch(self.p_prime), from_bloch(self.q), from_bloch(self.q_prime))
    }

    /// Named points in presentation order, for plot and table writers.
    pub fn named_points(&self) -> Vec<(&'static str, BlochPoint)> {
        vec![
            ("A", self.a),
            ("B", self.b),
            ("M", self.m),
            ("Mbar", self.m_bar),
            ("M0", self.m0),
            ("M1", self.m1),
            ("A1", self.a1),
            ("B1", self.b1),
            ("P", self.p),
            ("P'", self.p_prime),
            ("Q", self.q),
            ("Q'", self.q_prime),
            ("C0", CENTRE),
        ]
    }
}

/// Residuals of the matrix identities behind the construction.
#[derive(Debug, Clone, Copy)]
pub struct LambdaVerification {
    /// `‖ |A-B| - μ₂ I ‖`.
    pub abs_diff: f64,
    /// `‖ |I-A-B| - (1-2α+αβ) I ‖`.
    pub abs_co: f64,
    /// Barycentric identity for `A` in terms of `P, P', Q`.
    pub eq_a: f64,
    /// Barycentric identity for `B` in terms of `P, P', Q'`.
    pub eq_b: f64,
    /// `‖ defect(A, B) - λ I ‖`.
    pub defect: f64,
}

impl LambdaVerification {
    pub fn max_residual(&self) -> f64 {
        self.abs_diff.max(self.abs_co).max(self.eq_a).max(self.eq_b).max(self.defect)
    }
}

/// Checks the construction against matrix arithmetic; `true` when every
/// residual is below the scaled equality tolerance.
pub fn verify_lambda_compat(
    cons: &InternalCoupleConstruction,
    tol: &ToleranceConfig,
) -> Result<(bool, LambdaVerification)> {
    let a_m = from_bloch(cons.a);
    let b_m = from_bloch(cons.b);
    let (p, p_prime, q, q_prime) = cons.matrices();
    let id = HermitianMatrix::identity(2);

    let abs_diff = (&(&a_m - &b_m).abs_op()? - &id.scale(cons.mu2)).op_norm()?;
    let co_scalar = 1.0 - 2.0 * cons.alpha + cons.alpha * cons.beta;
    let abs_co = (&(&(&id - &a_m) - &b_m).abs_op()? - &id.scale(co_scalar)).op_norm()?;

    let combine = |last: &HermitianMatrix| {
        &(&p.scale(1.0 - cons.alpha) + &p_prime.scale(cons.alpha * (1.0 - cons.beta)))
            + &last.scale(cons.alpha * cons.beta)
    };
    let eq_a = (&combine(&q) - &a_m).op_norm()?;
    let eq_b = (&combine(&q_prime) - &b_m).op_norm()?;

    let ea = Effect::validate(a_m, tol)?;
    let eb = Effect::validate(b_m, tol)?;
    let defect = (&compat_defect(&ea, &eb)? - &id.scale(cons.lambda)).op_norm()?;

    let v = LambdaVerification { abs_diff, abs_co, eq_a, eq_b, defect };
    Ok((v.max_residual() <= tol.eq_scaled(2, 1.0), v))
}

/// The converse direction: a λ-compatible trace-one qubit pair should map to
/// an internal couple. Returns the verdict of [`is_internal_couple`] on the
/// represented points; preconditions (trace one, scalar defect) are errors.
pub fn internal_couple_converse(a: &Effect, b: &Effect, tol: &ToleranceConfig) -> Result<bool> {
    let pa = to_bloch(a.matrix(), tol)?;
    let pb = to_bloch(b.matrix(), tol)?;
    let report = is_x0_compatible(a, b, tol)?;
    if report.lambda.is_none() {
        return Err(Error::NotX0Compatible {
            reason: format!(
                "no scalar defect: norm {:.3e}, psd {}, central {}",
                report.defect_norm, report.defect_psd, report.defect_central
            ),
        });
    }
    is_internal_couple(pa, pb, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn bloch_map_round_trip() {
        let pt = BlochPoint::new(0.3, -0.2, 0.1);
        let m = from_bloch(pt);
        let back = to_bloch(&m, &tol()).unwrap();
        assert_eq!(pt, back);

        let p = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert_eq!(to_bloch(&p, &tol()).unwrap(), BlochPoint::new(1.0, 0.0, 0.0));
        let half = HermitianMatrix::identity(2).scale(0.5);
        assert_eq!(to_bloch(&half, &tol()).unwrap(), CENTRE);
        let q = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert_eq!(to_bloch(&q, &tol()).unwrap(), BlochPoint::new(0.5, 0.5, 0.0));
    }

    #[test]
    fn bloch_map_rejects_bad_input() {
        let d3 = HermitianMatrix::identity(3);
        assert!(matches!(to_bloch(&d3, &tol()), Err(Error::NotTwoByTwo { dim: 3 })));
        let d2 = HermitianMatrix::identity(2);
        assert!(matches!(to_bloch(&d2, &tol()), Err(Error::TraceNotOne { .. })));
    }

    #[test]
    fn det_identity_and_classification() {
        let pt = BlochPoint::new(0.7, 0.1, 0.0);
        let m = from_bloch(pt);
        // det from the matrix itself.
        let det = (m.entry(0, 0) * m.entry(1, 1) - m.entry(0, 1) * m.entry(1, 0)).re;
        assert!((det - bloch_det(pt)).abs() < 1e-14);
        assert!((bloch_det(pt) - 0.20).abs() < 1e-14);
        assert_eq!(classify_point(pt, &tol()), PointClass::InS);

        assert_eq!(classify_point(BlochPoint::new(1.0, 0.0, 0.0), &tol()), PointClass::OnSphere);
        assert_eq!(classify_point(CENTRE, &tol()), PointClass::Centre);
        assert_eq!(classify_point(BlochPoint::new(1.2, 0.0, 0.0), &tol()), PointClass::Outside);
    }

    #[test]
    fn internal_couple_predicate() {
        let a = BlochPoint::new(0.7, 0.1, 0.0);
        let b = BlochPoint::new(0.7, -0.1, 0.0);
        assert!(is_internal_couple(a, b, &tol()).unwrap());

        // Antipodal surface points fail containment.
        let n = BlochPoint::new(1.0, 0.0, 0.0);
        let s = BlochPoint::new(0.0, 0.0, 0.0);
        assert!(!is_internal_couple(n, s, &tol()).unwrap());

        let c = BlochPoint::new(0.6, 0.0, 0.0);
        let d = BlochPoint::new(0.4, 0.0, 0.0);
        assert!(is_internal_couple(c, d, &tol()).unwrap());

        assert!(matches!(is_internal_couple(a, a, &tol()), Err(Error::DegenerateCouple)));
    }

    #[test]
    fn worked_construction() {
        let a = BlochPoint::new(0.7, 0.1, 0.0);
        let b = BlochPoint::new(0.7, -0.1, 0.0);
        let cons = construct_lambda(a, b, &tol()).unwrap();

        let close = |p: BlochPoint, q: (f64, f64, f64)| p.dist(BlochPoint::new(q.0, q.1, q.2)) < 1e-12;
        assert!(close(cons.p, (1.0, 0.0, 0.0)));
        assert!(close(cons.p_prime, (0.0, 0.0, 0.0)));
        assert!(close(cons.m, (0.7, 0.0, 0.0)));
        assert!(close(cons.m_bar, (0.8, 0.0, 0.0)));
        assert!(close(cons.m0, (0.6, 0.0, 0.0)));
        assert!(close(cons.a1, (0.8, 0.2, 0.0)));
        assert!(close(cons.b1, (0.8, -0.2, 0.0)));
        assert!(close(cons.q, (0.5, 0.5, 0.0)));
        assert!(close(cons.q_prime, (0.5, -0.5, 0.0)));

        assert!((cons.alpha - 0.4).abs() < 1e-12);
        assert!((cons.beta - 0.5).abs() < 1e-12);
        assert!((cons.gamma - 0.4).abs() < 1e-12);
        assert!((cons.lambda - 0.4).abs() < 1e-12);
        assert!((cons.mu1 - 0.4).abs() < 1e-12);
        assert!((cons.mu2 - 0.2).abs() < 1e-12);

        // Matrix cross-check: A = λ·(I/2) + μ₁ P + μ₂ Q reproduces the
        // worked 0.4-defect matrix.
        let reassembled = &(&HermitianMatrix::identity(2).scale(0.5 * cons.lambda)
            + &from_bloch(cons.p).scale(cons.mu1))
            + &from_bloch(cons.q).scale(cons.mu2);
        let target = HermitianMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]).unwrap();
        assert!(reassembled.approx_eq(&target, 1e-12).unwrap());

        let (ok, v) = verify_lambda_compat(&cons, &tol()).unwrap();
        assert!(ok, "residuals: {v:?}");
        assert!(v.max_residual() < 1e-12);
    }

    #[test]
    fn construction_rejects_non_internal() {
        let a = BlochPoint::new(1.0, 0.0, 0.0);
        let b = BlochPoint::new(0.0, 0.0, 0.0);
        assert!(matches!(construct_lambda(a, b, &tol()), Err(Error::NotInternalCouple { .. })));
        let c = BlochPoint::new(0.7, 0.1, 0.0);
        assert!(matches!(construct_lambda(c, c, &tol()), Err(Error::DegenerateCouple)));
    }

    #[test]
    fn collinear_couples() {
        // Collinear with the axis: B coincides with M₀.
        let a = BlochPoint::new(0.7, 0.0, 0.0);
        let b = BlochPoint::new(0.6, 0.0, 0.0);
        let cons = construct_lambda(a, b, &tol()).unwrap();
        assert!((cons.lambda - 0.6).abs() < 1e-12);
        let (ok, v) = verify_lambda_compat(&cons, &tol()).unwrap();
        assert!(ok, "residuals: {v:?}");

        // Mirror order: A coincides with M₀.
        let cons = construct_lambda(b, a, &tol()).unwrap();
        assert!((cons.lambda - 0.6).abs() < 1e-12);
        assert!(verify_lambda_compat(&cons, &tol()).unwrap().0);

        // Midpoint at the centre: the degenerate-axis rule picks the
        // A-aligned diameter.
        let a = BlochPoint::new(0.55, 0.0, 0.0);
        let b = BlochPoint::new(0.45, 0.0, 0.0);
        let cons = construct_lambda(a, b, &tol()).unwrap();
        assert!((cons.lambda - 0.9).abs() < 1e-12);
        assert!(verify_lambda_compat(&cons, &tol()).unwrap().0);

        // Midpoint at the centre, couple off the axis.
        let a = BlochPoint::new(0.6, 0.2, 0.1);
        let b = a.antipode();
        let cons = construct_lambda(a, b, &tol()).unwrap();
        assert!(verify_lambda_compat(&cons, &tol()).unwrap().0);
    }

    #[test]
    fn perpendicularity_of_chords() {
        let a = BlochPoint::new(0.62, 0.13, -0.05);
        let b = BlochPoint::new(0.48, -0.07, 0.11);
        let cons = construct_lambda(a, b, &tol()).unwrap();
        let d1 = cons.a1.sub(cons.m0);
        let d2 = cons.b1.sub(cons.m0);
        assert!(d1.dot(d2).abs() < 1e-9);
        let e1 = cons.q.sub(cons.p);
        let e2 = cons.q_prime.sub(cons.p);
        assert!(e1.dot(e2).abs() < 1e-9);
        // Barycentric cross-check of alpha against the axis solve.
        let axis = cons.p_prime.sub(cons.p);
        let alpha_bary = cons.m0.sub(cons.p).dot(axis) / axis.dot(axis);
        assert!((alpha_bary - cons.alpha).abs() < 1e-10);
        // Segment-length identities of the proof.
        assert!((cons.m.dist(cons.m0) - 0.5 * cons.alpha * cons.beta).abs() < 1e-10);
        assert!(
            (cons.p.dist(cons.m) - (cons.alpha - 0.5 * cons.alpha * cons.beta)).abs() < 1e-10
        );
    }

    #[test]
    fn projections_on_sphere() {
        let a = BlochPoint::new(0.62, 0.13, -0.05);
        let b = BlochPoint::new(0.48, -0.07, 0.11);
        let cons = construct_lambda(a, b, &tol()).unwrap();
        for pt in [cons.p, cons.p_prime, cons.q, cons.q_prime] {
            assert_eq!(classify_point(pt, &tol()), PointClass::OnSphere);
            let e = Effect::validate(from_bloch(pt), &tol()).unwrap();
            assert!(e.is_projection(&tol()));
        }
        let q = from_bloch(cons.q);
        let q_prime = from_bloch(cons.q_prime);
        let id = HermitianMatrix::identity(2);
        assert!((&(&id - &q) - &q_prime).op_norm().unwrap() < 1e-10);
    }

    #[test]
    fn converse_on_worked_pair() {
        let a = Effect::validate(
            HermitianMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]).unwrap(),
            &tol(),
        )
        .unwrap();
        let b = Effect::validate(
            HermitianMatrix::from_real_rows(&[&[0.7, -0.1], &[-0.1, 0.3]]).unwrap(),
            &tol(),
        )
        .unwrap();
        assert!(internal_couple_converse(&a, &b, &tol()).unwrap());

        // Non-compatible pair: precondition error.
        let h = Effect::validate(HermitianMatrix::identity(2).scale(0.5), &tol()).unwrap();
        assert!(matches!(
            internal_couple_converse(&h, &h, &tol()),
            Err(Error::NotX0Compatible { .. })
        ));
    }
}
