//! The one-parameter family of biarcs interpolating G¹ chord data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{sinc, PiecewiseConstCurve, Segment};
use crate::error::{invalid, Error, Result};
use crate::geom::{pt, ChordData, Point, Pose};

/// Member `p` of the biarc family; `p < 0` gives a long biarc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiarcParams {
    pub chord: ChordData,
    pub p: f64,
}

/// Which arc of the convexity-limit biarc is straight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StraightArc {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiarcLength {
    pub first: f64,
    pub second: f64,
    pub total: f64,
}

impl BiarcParams {
    pub fn new(chord: ChordData, p: f64) -> Result<Self> {
        if !p.is_finite() || p == 0.0 {
            return Err(invalid("biarc parameter p must be finite and nonzero"));
        }
        Ok(BiarcParams { chord, p })
    }

    pub fn is_long(&self) -> bool {
        self.p < 0.0
    }

    /// Normalized curvatures `(a, b)`; physical curvatures are `a/c`, `b/c`.
    pub fn normalized_curvatures(&self) -> (f64, f64) {
        let ch = &self.chord;
        let so = ch.omega().sin();
        (
            -ch.alpha.sin() - so / self.p,
            ch.beta.sin() + self.p * so,
        )
    }

    pub fn curvatures(&self) -> (f64, f64) {
        let (a, b) = self.normalized_curvatures();
        (a / self.chord.c, b / self.chord.c)
    }

    /// Tangent direction at the join point.
    pub fn join_tangent(&self) -> f64 {
        let (ha, hb) = (0.5 * self.chord.alpha, 0.5 * self.chord.beta);
        let p = self.p;
        -2.0 * (p * ha.sin() + hb.sin()).atan2(p * ha.cos() + hb.cos())
    }

    /// Same quantity through the γ/ω form; agrees with [`Self::join_tangent`] modulo 2π.
    pub fn join_tangent_alt(&self) -> f64 {
        let p = self.p;
        -self.chord.omega() + 2.0 * ((1.0 - p) / (1.0 + p) * (0.5 * self.chord.gamma()).tan()).atan()
    }

    pub fn join_point(&self) -> Point {
        let p = self.p;
        let g = self.chord.gamma();
        let den = p * p + 2.0 * p * g.cos() + 1.0;
        pt(p * p - 1.0, 2.0 * p * g.sin()) * (self.chord.c / den)
    }

    /// Signed turnings `(θ₁, θ₂)` of the two arcs.
    pub fn turnings(&self) -> (f64, f64) {
        let tj = self.join_tangent();
        (tj - self.chord.alpha, self.chord.beta - tj)
    }

    pub fn length(&self) -> BiarcLength {
        let (a, b) = self.normalized_curvatures();
        let (t1, t2) = self.turnings();
        let j = self.join_point();
        let c = self.chord.c;
        let first = arc_length(t1, (j - self.chord.a()).norm(), a, c);
        let second = arc_length(t2, (self.chord.b() - j).norm(), b, c);
        BiarcLength {
            first,
            second,
            total: first + second,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.length().total
    }
}

/// Arc length from turning and chord, falling back to `c·θ/a` past a half turn where the
/// chord carries no information.
fn arc_length(theta: f64, chord: f64, a: f64, c: f64) -> f64 {
    if theta.abs() <= PI {
        chord / sinc(0.5 * theta)
    } else {
        c * theta / a
    }
}

/// Biarc length as `p → 0`: a single arc tangent to β at B.
pub fn length_at_zero(chord: &ChordData) -> f64 {
    2.0 * chord.c / sinc(chord.beta)
}

/// Biarc length as `p → ∞`: a single arc tangent to α at A.
pub fn length_at_infinity(chord: &ChordData) -> f64 {
    2.0 * chord.c / sinc(chord.alpha)
}

/// Direction of monotonicity of `S(p)` over `p > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

/// `S` decreases when `|α| < |β|`, increases when `|α| > |β|`.
pub fn length_monotonicity(chord: &ChordData, eps: f64) -> Monotonicity {
    let d = chord.alpha.abs() - chord.beta.abs();
    if d < -eps {
        Monotonicity::Decreasing
    } else if d > eps {
        Monotonicity::Increasing
    } else {
        Monotonicity::Constant
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityThreshold {
    pub p_bar: f64,
    pub straight: StraightArc,
    /// Whether any positive `p` gives a convex biarc.
    pub attainable: bool,
}

/// Parameter at which one arc of the biarc becomes straight.
pub fn convexity_threshold(chord: &ChordData) -> Result<ConvexityThreshold> {
    let so = chord.omega().sin();
    let (sa, sb) = (chord.alpha.sin(), chord.beta.sin());
    let (p_bar, straight) = if chord.alpha.abs() < chord.beta.abs() {
        (-so / sa, StraightArc::First)
    } else {
        (-sb / so, StraightArc::Second)
    };
    if !p_bar.is_finite() {
        return Err(Error::DegenerateLens);
    }
    Ok(ConvexityThreshold {
        p_bar,
        straight,
        attainable: p_bar > 0.0,
    })
}

/// Length of the biarc at the convexity threshold.
pub fn convexity_limit_length(chord: &ChordData) -> Result<f64> {
    let th = convexity_threshold(chord)?;
    if !th.attainable {
        return Err(Error::NonConvex(
            "no convex biarc exists for these end tangents".into(),
        ));
    }
    Ok(BiarcParams::new(*chord, th.p_bar)?.total_length())
}

/// A concrete biarc placed in the chord frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Biarc {
    pub params: BiarcParams,
    pub start: Pose,
    pub segments: [Segment; 2],
}

impl Biarc {
    pub fn new(params: BiarcParams) -> Self {
        let (k1, k2) = params.curvatures();
        let len = params.length();
        Biarc {
            params,
            start: params.chord.start(),
            segments: [Segment::new(k1, len.first), Segment::new(k2, len.second)],
        }
    }

    pub fn from_chord(chord: ChordData, p: f64) -> Result<Self> {
        Ok(Biarc::new(BiarcParams::new(chord, p)?))
    }

    pub fn length(&self) -> f64 {
        self.segments[0].l + self.segments[1].l
    }

    pub fn curvatures(&self) -> (f64, f64) {
        (self.segments[0].k, self.segments[1].k)
    }

    pub fn to_curve(&self) -> PiecewiseConstCurve {
        PiecewiseConstCurve {
            start: self.start,
            segments: self.segments.to_vec(),
        }
    }

    pub fn join_point(&self) -> Point {
        self.params.join_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::wrap_angle;

    fn ch(a: f64, b: f64) -> ChordData {
        ChordData::new(1.0, a, b).unwrap()
    }

    #[test]
    fn symmetric_data_gives_equal_arcs() {
        let bp = BiarcParams::new(ch(0.5, -0.5), 1.0).unwrap();
        let (a, b) = bp.normalized_curvatures();
        assert!((a - b).abs() < 1e-15);
        assert!(bp.join_point().re.abs() < 1e-15);
    }

    #[test]
    fn join_tangent_forms_agree() {
        for &(a, b, p) in &[(0.3, 1.1, 0.7), (-1.0, 2.5, 3.0), (2.0, -0.4, 0.2)] {
            let bp = BiarcParams::new(ch(a, b), p).unwrap();
            assert!(wrap_angle(bp.join_tangent() - bp.join_tangent_alt()).abs() < 1e-13);
        }
    }

    #[test]
    fn traced_biarc_closes() {
        for &(a, b, p) in &[(0.3, 1.1, 0.7), (-1.0, 2.5, 3.0), (2.0, -0.4, 0.2), (-0.3, 0.9, 1.0)] {
            let bi = Biarc::from_chord(ch(a, b), p).unwrap();
            let c = bi.to_curve();
            let bp = c.breakpoints();
            assert!((bp[1].point - bi.join_point()).norm() < 1e-13);
            assert!((bp[2].point - pt(1.0, 0.0)).norm() < 1e-13);
            assert!(wrap_angle(bp[2].tau - b).abs() < 1e-13);
        }
    }

    #[test]
    fn limits() {
        let c = ch(-0.3, 0.9);
        let s0 = BiarcParams::new(c, 1e-9).unwrap().total_length();
        let si = BiarcParams::new(c, 1e9).unwrap().total_length();
        assert!((s0 - length_at_zero(&c)).abs() < 1e-7);
        assert!((si - length_at_infinity(&c)).abs() < 1e-7);
    }

    #[test]
    fn threshold_makes_an_arc_straight() {
        let c = ch(-0.3, 0.9);
        let th = convexity_threshold(&c).unwrap();
        assert_eq!(th.straight, StraightArc::First);
        let (a, _) = BiarcParams::new(c, th.p_bar).unwrap().normalized_curvatures();
        assert!(a.abs() < 1e-15);
        let c = ch(-0.9, 0.3);
        let th = convexity_threshold(&c).unwrap();
        assert_eq!(th.straight, StraightArc::Second);
        let (_, b) = BiarcParams::new(c, th.p_bar).unwrap().normalized_curvatures();
        assert!(b.abs() < 1e-15);
        assert!(!convexity_threshold(&ch(0.3, 0.9)).unwrap().attainable);
    }

    #[test]
    fn straight_first_arc_length() {
        let c = ch(-0.3, 0.9);
        let (g, w) = (c.gamma(), c.omega());
        let p = convexity_threshold(&c).unwrap().p_bar;
        let len = BiarcParams::new(c, p).unwrap().length();
        // First arc is the segment from A to J₀.
        assert!((len.first - (-2.0 * w.sin() / g.sin())).abs() < 1e-12);
    }
}
