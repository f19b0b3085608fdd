//! Points, poses, rigid motions and chord-frame Hermite data.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, invalid, Error, Result};

pub type Point = Complex64;

/// Default tolerance for predicate boundaries.
pub const EPS: f64 = 1e-9;

#[inline]
pub fn pt(x: f64, y: f64) -> Point {
    Complex64::new(x, y)
}

/// Unit vector at angle `a`.
#[inline]
pub fn unit(a: f64) -> Point {
    Complex64::cis(a)
}

/// Wraps into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Wraps into [−π, π).
pub fn wrap_angle_low(a: f64) -> f64 {
    let r = wrap_angle(a);
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Sign with a dead zone: values within `eps` of zero give 0.
pub fn sign_eps(v: f64, eps: f64) -> i8 {
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

/// Position plus tangent direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub point: Point,
    pub tau: f64,
}

impl Pose {
    pub fn new(point: Point, tau: f64) -> Self {
        Pose { point, tau }
    }

    pub fn origin(tau: f64) -> Self {
        Pose::new(Point::new(0.0, 0.0), tau)
    }

    pub fn tangent(&self) -> Point {
        unit(self.tau)
    }

    /// Same place, opposite direction.
    pub fn reversed(&self) -> Self {
        Pose::new(self.point, self.tau + PI)
    }
}

/// Point, tangent and curvature at a curve end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureElement {
    pub pose: Pose,
    pub k: f64,
}

impl CurvatureElement {
    pub fn new(point: Point, tau: f64, k: f64) -> Self {
        CurvatureElement {
            pose: Pose::new(point, tau),
            k,
        }
    }

    /// Left unit normal.
    pub fn normal(&self) -> Point {
        Complex64::i() * self.pose.tangent()
    }

    /// Centre of the osculating circle, `None` for a straight element.
    pub fn center(&self) -> Option<Point> {
        (self.k != 0.0).then(|| self.pose.point + self.normal() / self.k)
    }
}

/// `z ↦ rotation·z + translation` with `|rotation| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub rotation: Complex64,
    pub translation: Complex64,
}

impl Default for RigidMotion {
    fn default() -> Self {
        RigidMotion::identity()
    }
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion {
            rotation: Complex64::new(1.0, 0.0),
            translation: Complex64::new(0.0, 0.0),
        }
    }

    pub fn new(angle: f64, translation: Point) -> Self {
        RigidMotion {
            rotation: unit(angle),
            translation,
        }
    }

    pub fn angle(&self) -> f64 {
        self.rotation.arg()
    }

    pub fn apply(&self, z: Point) -> Point {
        self.rotation * z + self.translation
    }

    pub fn apply_pose(&self, p: Pose) -> Pose {
        Pose::new(self.apply(p.point), p.tau + self.angle())
    }

    pub fn inverse(&self) -> Self {
        let r = self.rotation.conj();
        RigidMotion {
            rotation: r,
            translation: -(r * self.translation),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &RigidMotion) -> Self {
        RigidMotion {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }
}

/// G¹ data in the chord frame: `A = (−c, 0)`, `B = (c, 0)`, tangents α at A and β at B.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordData {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ChordData {
    /// Angles are wrapped into (−π, π].
    pub fn new(c: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_finite("c", c)?;
        check_finite("alpha", alpha)?;
        check_finite("beta", beta)?;
        if c <= 0.0 {
            return Err(invalid("half-chord c must be positive"));
        }
        Ok(ChordData {
            c,
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
        })
    }

    pub fn gamma(&self) -> f64 {
        0.5 * (self.alpha - self.beta)
    }

    pub fn omega(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    pub fn a(&self) -> Point {
        pt(-self.c, 0.0)
    }

    pub fn b(&self) -> Point {
        pt(self.c, 0.0)
    }

    pub fn start(&self) -> Pose {
        Pose::new(self.a(), self.alpha)
    }

    pub fn end(&self) -> Pose {
        Pose::new(self.b(), self.beta)
    }

    /// Mirror image in the chord line.
    pub fn reflect_x(&self) -> Self {
        ChordData {
            c: self.c,
            alpha: wrap_angle(-self.alpha),
            beta: wrap_angle(-self.beta),
        }
    }

    /// Same curve traversed from B to A, re-framed by a half turn.
    pub fn reversed(&self) -> Self {
        ChordData {
            c: self.c,
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Mirror image in the perpendicular bisector of the chord, traversed from B to A.
    pub fn reflect_y(&self) -> Self {
        ChordData {
            c: self.c,
            alpha: wrap_angle(-self.beta),
            beta: wrap_angle(-self.alpha),
        }
    }
}

/// G² data in the chord frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2ChordData {
    pub chord: ChordData,
    pub k1: f64,
    pub k2: f64,
}

impl G2ChordData {
    pub fn new(c: f64, alpha: f64, beta: f64, k1: f64, k2: f64) -> Result<Self> {
        let chord = ChordData::new(c, alpha, beta)?;
        check_finite("k1", k1)?;
        check_finite("k2", k2)?;
        Ok(G2ChordData { chord, k1, k2 })
    }

    pub fn c(&self) -> f64 {
        self.chord.c
    }

    pub fn alpha(&self) -> f64 {
        self.chord.alpha
    }

    pub fn beta(&self) -> f64 {
        self.chord.beta
    }

    pub fn start(&self) -> CurvatureElement {
        CurvatureElement::new(self.chord.a(), self.chord.alpha, self.k1)
    }

    pub fn end(&self) -> CurvatureElement {
        CurvatureElement::new(self.chord.b(), self.chord.beta, self.k2)
    }

    pub fn reflect_x(&self) -> Self {
        G2ChordData {
            chord: self.chord.reflect_x(),
            k1: -self.k1,
            k2: -self.k2,
        }
    }

    /// Reverse traversal; curvatures swap and change sign.
    pub fn reversed(&self) -> Self {
        G2ChordData {
            chord: self.chord.reversed(),
            k1: -self.k2,
            k2: -self.k1,
        }
    }

    /// Mirror in the chord bisector plus reversal; curvatures swap, signs kept.
    pub fn reflect_y(&self) -> Self {
        G2ChordData {
            chord: self.chord.reflect_y(),
            k1: self.k2,
            k2: self.k1,
        }
    }
}

/// `Q = (k₁c + sin α)(k₂c − sin β) + sin²ω`, the inversive invariant of the two
/// boundary curvature circles.
pub fn q_invariant(d: &G2ChordData) -> f64 {
    let ch = &d.chord;
    let so = ch.omega().sin();
    (d.k1 * ch.c + ch.alpha.sin()) * (d.k2 * ch.c - ch.beta.sin()) + so * so
}

fn short_angle_conditions(d: &G2ChordData, eps: f64) -> Result<bool> {
    let (a, b) = (d.chord.alpha, d.chord.beta);
    let dk = d.k2 - d.k1;
    if dk.abs() <= eps * (1.0 + d.k1.abs().max(d.k2.abs())) {
        return Err(Error::Unsupported(
            "equal end curvatures: a circle, not a spiral".into(),
        ));
    }
    let sum = if dk > 0.0 {
        a + b
    } else {
        wrap_angle_low(a) + wrap_angle_low(b)
    };
    let sign_ok = if dk > 0.0 { sum > eps } else { sum < -eps };
    Ok(sign_ok && sum.abs() < TAU - eps)
}

/// Admissibility of G² data for a short non-biarc spiral.
pub fn is_short_spiral_data(d: &G2ChordData, eps: f64) -> Result<bool> {
    let angles = short_angle_conditions(d, eps)?;
    Ok(angles && q_invariant(d) < -eps)
}

/// As [`is_short_spiral_data`] but also accepting data realized by a single biarc (`Q = 0`).
pub fn is_short_spiral_or_biarc_data(d: &G2ChordData, eps: f64) -> Result<bool> {
    let angles = short_angle_conditions(d, eps)?;
    Ok(angles && q_invariant(d) <= eps)
}

/// `sgn(k₂ − k₁) = sgn(α + β)`, each sign taken with a dead zone of `eps`.
pub fn vogt_sign_ok(d: &G2ChordData, eps: f64) -> bool {
    sign_eps(d.k2 - d.k1, eps) == sign_eps(d.chord.alpha + d.chord.beta, eps)
}

/// Signed curvature of the circle through three points (positive when they turn left).
pub fn menger_curvature(a: Point, b: Point, c: Point) -> f64 {
    let area2 = cross(b - a, c - a);
    let den = (b - a).norm() * (c - b).norm() * (a - c).norm();
    if den == 0.0 {
        0.0
    } else {
        2.0 * area2 / den
    }
}

/// Circle through three points with signed radius (positive for counter-clockwise order).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn through(a: Point, b: Point, c: Point) -> Result<Circle> {
        let (ab, ac) = (b - a, c - a);
        let d = 2.0 * cross(ab, ac);
        if d == 0.0 || !d.is_finite() {
            return Err(Error::Numerical("collinear points have no circumcircle".into()));
        }
        let (nb, nc) = (ab.norm_sqr(), ac.norm_sqr());
        let off = pt(ac.im * nb - ab.im * nc, ab.re * nc - ac.re * nb) / d;
        let r = off.norm();
        Ok(Circle {
            center: a + off,
            radius: if d > 0.0 { r } else { -r },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_ranges() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle_low(PI), -PI);
        assert!((wrap_angle(3.0 * PI + 0.25) - (-PI + 0.25)).abs() < 1e-12);
    }

    #[test]
    fn short_data_examples() {
        let d = G2ChordData::new(1.0, -0.3, 0.8, 0.0, 2.0).unwrap();
        assert!(is_short_spiral_data(&d, EPS).unwrap());
        assert!(vogt_sign_ok(&d, EPS));
        let d = G2ChordData::new(1.0, 0.5, 0.5, 0.0, 2.0).unwrap();
        assert!(!is_short_spiral_data(&d, EPS).unwrap());
        let d = G2ChordData::new(1.0, 0.5, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(is_short_spiral_data(&d, EPS), Err(Error::Unsupported(_))));
    }

    #[test]
    fn q_is_symmetric() {
        let d = G2ChordData::new(1.3, -0.4, 1.1, 0.2, 1.7).unwrap();
        let q = q_invariant(&d);
        assert!((q_invariant(&d.reflect_x()) - q).abs() < 1e-14);
        assert!((q_invariant(&d.reversed()) - q).abs() < 1e-14);
        assert!((q_invariant(&d.reflect_y()) - q).abs() < 1e-14);
    }

    #[test]
    fn circle_through_points() {
        let c = Circle::through(pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0)).unwrap();
        assert!(c.center.norm() < 1e-15);
        assert!((c.radius - 1.0).abs() < 1e-15);
        let c = Circle::through(pt(-1.0, 0.0), pt(0.0, 1.0), pt(1.0, 0.0)).unwrap();
        assert!((c.radius + 1.0).abs() < 1e-15);
        assert!((menger_curvature(pt(-1.0, 0.0), pt(0.0, 1.0), pt(1.0, 0.0)) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn motion_inverse() {
        let m = RigidMotion::new(0.7, pt(2.0, -1.0));
        let z = pt(0.3, 0.9);
        assert!((m.inverse().apply(m.apply(z)) - z).norm() < 1e-15);
        let n = RigidMotion::new(-1.2, pt(0.5, 0.5));
        assert!((m.then_after(&n).apply(z) - m.apply(n.apply(z))).norm() < 1e-15);
    }
}
