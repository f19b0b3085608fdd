//! Piecewise-constant-curvature curves and the closed-form arc endpoint functions.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::{unit, wrap_angle, G2ChordData, ChordData, Point, Pose, RigidMotion};

/// `sin x / x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Endpoint of an arc of curvature `k` and length `l` starting at the origin along +x.
pub fn z1(k: f64, l: f64) -> Complex64 {
    let h = 0.5 * k * l;
    unit(h) * (l * sinc(h))
}

/// Endpoint of two consecutive arcs from the origin along +x.
pub fn z2(q1: f64, l1: f64, q2: f64, l2: f64) -> Complex64 {
    z1(q1, l1) + unit(q1 * l1) * z1(q2, l2)
}

/// Endpoint of three consecutive arcs from the origin along +x.
pub fn z3(q1: f64, l1: f64, q2: f64, l2: f64, q3: f64, l3: f64) -> Complex64 {
    z2(q1, l1, q2, l2) + unit(q1 * l1 + q2 * l2) * z1(q3, l3)
}

/// Endpoint of any number of arcs from the origin along +x.
pub fn zn(segments: &[Segment]) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    let mut tau = 0.0;
    for s in segments {
        z += unit(tau) * z1(s.k, s.l);
        tau += s.k * s.l;
    }
    z
}

/// Circular arc (or straight segment when `k = 0`) of signed curvature `k` and length `l`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub k: f64,
    pub l: f64,
}

impl Segment {
    pub fn new(k: f64, l: f64) -> Self {
        Segment { k, l }
    }

    pub fn turning(&self) -> f64 {
        self.k * self.l
    }

    pub fn point_from(&self, start: Pose, s: f64) -> Point {
        start.point + start.tangent() * z1(self.k, s)
    }

    pub fn end_from(&self, start: Pose) -> Pose {
        Pose::new(self.point_from(start, self.l), start.tau + self.turning())
    }

    /// Distance from `x` to this arc placed at `start`.
    ///
    /// Works in the arc's local frame so that nearly straight arcs do not lose
    /// precision to a distant centre.
    pub fn distance_from(&self, start: Pose, x: Point) -> f64 {
        let u = (x - start.point) * unit(-start.tau);
        let (px, py, k) = (u.re, u.im, self.k);
        let s_star = arc_param(start, k, x);
        if (0.0..=self.l).contains(&s_star) {
            let sg = if k < 0.0 { -1.0 } else { 1.0 };
            let num = k.abs() * (px * px + py * py) - 2.0 * py * sg;
            let den = 1.0 + ((k * px).powi(2) + (k * py - 1.0).powi(2)).sqrt();
            (num / den).abs()
        } else {
            let e = z1(k, self.l);
            u.norm().min((u - e).norm())
        }
    }
}

/// Arc length from `start` along the circle of curvature `k` to the foot of `x` on it,
/// in `[0, 2π/|k|)`. For `k = 0` it is the signed projection onto the tangent line.
pub fn arc_param(start: Pose, k: f64, x: Point) -> f64 {
    let u = (x - start.point) * unit(-start.tau);
    if k == 0.0 {
        return u.re;
    }
    let phi = (k * u.re).atan2(1.0 - k * u.im);
    let s = phi / k;
    if s < 0.0 {
        s + TAU / k.abs()
    } else {
        s
    }
}

/// Arc with curvature `k` from `start` to `target`. The turning follows from the chord
/// direction; the length from the chord when the turning is below π, otherwise from `k`.
pub fn segment_to(start: Pose, target: Point, k: f64) -> (Segment, f64) {
    let d = target - start.point;
    let chord = d.norm();
    if chord == 0.0 {
        return (Segment::new(k, 0.0), 0.0);
    }
    let theta = 2.0 * wrap_angle(d.arg() - start.tau);
    let l = if theta.abs() < PI || k == 0.0 {
        chord / sinc(0.5 * theta)
    } else {
        theta / k
    };
    (Segment::new(k, l), theta)
}

/// Start pose plus a list of arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstCurve {
    pub start: Pose,
    pub segments: Vec<Segment>,
}

impl PiecewiseConstCurve {
    pub fn new(start: Pose, segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(invalid("curve needs at least one segment"));
        }
        for s in &segments {
            if !(s.l.is_finite() && s.k.is_finite()) || s.l < 0.0 {
                return Err(invalid("segment lengths must be finite and non-negative"));
            }
        }
        if !(start.point.re.is_finite() && start.point.im.is_finite() && start.tau.is_finite()) {
            return Err(invalid("start pose is not finite"));
        }
        Ok(PiecewiseConstCurve { start, segments })
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.l).sum()
    }

    pub fn turning(&self) -> f64 {
        self.segments.iter().map(Segment::turning).sum()
    }

    /// Poses at the segment boundaries, `segments.len() + 1` of them.
    pub fn breakpoints(&self) -> Vec<Pose> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut p = self.start;
        out.push(p);
        for s in &self.segments {
            p = s.end_from(p);
            out.push(p);
        }
        out
    }

    pub fn end(&self) -> Pose {
        self.segments.iter().fold(self.start, |p, s| s.end_from(p))
    }

    pub fn pose_at(&self, s: f64) -> Pose {
        let mut p = self.start;
        let mut rest = s.max(0.0);
        for (i, seg) in self.segments.iter().enumerate() {
            if rest <= seg.l || i + 1 == self.segments.len() {
                let t = rest.min(seg.l);
                return Pose::new(seg.point_from(p, t), p.tau + seg.k * t);
            }
            rest -= seg.l;
            p = seg.end_from(p);
        }
        p
    }

    pub fn point_at(&self, s: f64) -> Point {
        self.pose_at(s).point
    }

    /// Curvature levels of the non-empty segments.
    pub fn levels(&self) -> Vec<f64> {
        self.segments.iter().filter(|s| s.l > 0.0).map(|s| s.k).collect()
    }

    pub fn first_curvature(&self) -> f64 {
        self.levels().first().copied().unwrap_or(self.segments[0].k)
    }

    pub fn last_curvature(&self) -> f64 {
        self.levels()
            .last()
            .copied()
            .unwrap_or(self.segments[self.segments.len() - 1].k)
    }

    /// Curvature is monotone along the curve (non-strictly).
    pub fn is_monotone(&self) -> bool {
        let lv = self.levels();
        lv.windows(2).all(|w| w[1] >= w[0]) || lv.windows(2).all(|w| w[1] <= w[0])
    }

    /// The curve and its chord bound a convex region: curvature keeps one sign and both
    /// end tangents lean toward the same side of the chord.
    pub fn is_convex_arc(&self) -> bool {
        let lv = self.levels();
        let sign = if lv.iter().all(|k| *k >= 0.0) {
            1.0
        } else if lv.iter().all(|k| *k <= 0.0) {
            -1.0
        } else {
            return false;
        };
        let chord = self.end().point - self.start.point;
        if chord.norm() == 0.0 {
            return false;
        }
        let mut a = sign * wrap_angle(self.start.tau - chord.arg());
        if a >= PI {
            a = -PI;
        }
        let b = a + sign * self.turning();
        (-PI..=0.0).contains(&a) && (0.0..=PI).contains(&b)
    }

    /// Points along the curve, spaced at most `max_len` in length and `max_angle` in turning
    /// within each segment. Includes both ends.
    pub fn sample(&self, max_len: f64, max_angle: f64) -> Vec<Point> {
        let mut out = vec![self.start.point];
        let mut p = self.start;
        for seg in &self.segments {
            let n = ((seg.l / max_len).max(seg.turning().abs() / max_angle).ceil() as usize).max(1);
            for j in 1..=n {
                out.push(seg.point_from(p, seg.l * j as f64 / n as f64));
            }
            p = seg.end_from(p);
        }
        out
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        let mut p = self.start;
        let mut best = f64::INFINITY;
        for seg in &self.segments {
            best = best.min(seg.distance_from(p, x));
            p = seg.end_from(p);
        }
        best
    }

    /// Sampled Hausdorff distance: samples of each curve against exact distance to the other.
    pub fn hausdorff(&self, other: &PiecewiseConstCurve, max_len: f64) -> f64 {
        let ang = 0.01;
        let a = self
            .sample(max_len, ang)
            .into_iter()
            .map(|x| other.distance_to(x))
            .fold(0.0, f64::max);
        let b = other
            .sample(max_len, ang)
            .into_iter()
            .map(|x| self.distance_to(x))
            .fold(0.0, f64::max);
        a.max(b)
    }

    pub fn reversed(&self) -> Self {
        let end = self.end();
        PiecewiseConstCurve {
            start: end.reversed(),
            segments: self
                .segments
                .iter()
                .rev()
                .map(|s| Segment::new(-s.k, s.l))
                .collect(),
        }
    }

    pub fn transformed(&self, m: &RigidMotion) -> Self {
        PiecewiseConstCurve {
            start: m.apply_pose(self.start),
            segments: self.segments.clone(),
        }
    }
}

/// Expresses the curve's end data in its chord frame. The returned motion maps the
/// curve's plane onto the chord frame.
pub fn chord_frame(curve: &PiecewiseConstCurve) -> Result<(G2ChordData, RigidMotion)> {
    let a = curve.start;
    let b = curve.end();
    let v = b.point - a.point;
    let len = v.norm();
    if !(len > 0.0) {
        return Err(invalid("curve endpoints coincide; chord frame undefined"));
    }
    let th = v.arg();
    let rot = unit(-th);
    let mid = 0.5 * (a.point + b.point);
    let motion = RigidMotion {
        rotation: rot,
        translation: -(rot * mid),
    };
    let chord = ChordData::new(0.5 * len, a.tau - th, b.tau - th)?;
    Ok((
        G2ChordData {
            chord,
            k1: curve.first_curvature(),
            k2: curve.last_curvature(),
        },
        motion,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;

    #[test]
    fn z1_limits() {
        assert!((z1(0.0, 2.0) - pt(2.0, 0.0)).norm() < 1e-15);
        let z = z1(1.0, PI);
        assert!((z - pt(0.0, 2.0)).norm() < 1e-14);
        let z = z1(1e-9, 1.0);
        assert!((z - pt(1.0, 0.5e-9)).norm() < 1e-15);
    }

    #[test]
    fn z2_matches_tracing() {
        let c = PiecewiseConstCurve::new(
            Pose::origin(0.0),
            vec![Segment::new(0.3, 1.2), Segment::new(-0.8, 2.0)],
        )
        .unwrap();
        assert!((c.end().point - z2(0.3, 1.2, -0.8, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn distance_to_arc() {
        let seg = Segment::new(1.0, PI);
        let p = Pose::origin(0.0);
        // Upper half circle of radius 1 centred at (0, 1): the point (0, 1) is at distance 1.
        assert!((seg.distance_from(p, pt(0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((seg.distance_from(p, pt(1.0, 1.0)) - 0.0).abs() < 1e-15);
        assert!((seg.distance_from(p, pt(3.0, 1.0)) - 2.0).abs() < 1e-15);
        // Beyond the arc's end the nearest point is an endpoint.
        assert!((seg.distance_from(p, pt(-1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
        let line = Segment::new(0.0, 2.0);
        assert!((line.distance_from(p, pt(1.0, -0.5)) - 0.5).abs() < 1e-15);
        assert!((line.distance_from(p, pt(3.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn segment_to_reaches_target() {
        let start = Pose::new(pt(0.2, -0.1), 0.4);
        for &k in &[2.0, -0.7, 0.0, 0.35] {
            let seg = Segment::new(k, 2.5);
            let target = seg.point_from(start, 2.5);
            let (s, theta) = segment_to(start, target, k);
            assert!((s.l - 2.5).abs() < 1e-12, "{k}");
            assert!((theta - k * 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn chord_frame_roundtrip() {
        let c = PiecewiseConstCurve::new(
            Pose::new(pt(1.0, 2.0), 0.3),
            vec![Segment::new(0.2, 1.0), Segment::new(0.9, 1.5)],
        )
        .unwrap();
        let (d, m) = chord_frame(&c).unwrap();
        let a = m.apply_pose(c.start);
        assert!((a.point - pt(-d.c(), 0.0)).norm() < 1e-14);
        assert!((wrap_angle(a.tau - d.alpha())).abs() < 1e-14);
        let back = m.inverse().apply_pose(d.chord.start());
        assert!((back.point - c.start.point).norm() < 1e-14);
        assert_eq!((d.k1, d.k2), (0.2, 0.9));
    }

    #[test]
    fn convex_arc_detection() {
        let half = PiecewiseConstCurve::new(Pose::origin(-0.5 * PI), vec![Segment::new(1.0, PI)]).unwrap();
        assert!(half.is_convex_arc());
        let most = PiecewiseConstCurve::new(Pose::origin(-0.5 * PI), vec![Segment::new(1.0, 1.9 * PI)]).unwrap();
        assert!(most.is_convex_arc());
        let more = PiecewiseConstCurve::new(
            Pose::origin(-0.5 * PI),
            vec![Segment::new(1.0, 1.5 * PI), Segment::new(0.0, 3.0)],
        )
        .unwrap();
        assert!(!more.is_convex_arc());
        let neg = PiecewiseConstCurve::new(Pose::origin(0.5 * PI), vec![Segment::new(-1.0, PI)]).unwrap();
        assert!(neg.is_convex_arc());
        let s = PiecewiseConstCurve::new(
            Pose::origin(0.0),
            vec![Segment::new(1.0, 0.5), Segment::new(-1.0, 0.5)],
        )
        .unwrap();
        assert!(!s.is_convex_arc());
    }

    #[test]
    fn reversal_retraces() {
        let c = PiecewiseConstCurve::new(
            Pose::new(pt(0.0, 0.0), 1.0),
            vec![Segment::new(0.5, 1.0), Segment::new(-1.0, 0.7), Segment::new(2.0, 0.3)],
        )
        .unwrap();
        let r = c.reversed();
        assert!((r.end().point - c.start.point).norm() < 1e-14);
        assert!((wrap_angle(r.end().tau - c.start.tau - PI)).abs() < 1e-14);
    }
}
