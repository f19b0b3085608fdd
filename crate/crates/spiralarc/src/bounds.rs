//! Sharp length bounds for convex spiral arcs from their end data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ChordData, G2ChordData, EPS};

/// Reflection that brings data to the increasing, non-negative curvature case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Identity,
    /// Mirror in the chord line.
    ReflectX,
    /// Mirror in the chord bisector (with reversal).
    ReflectY,
    /// Half turn (reversal).
    ReflectXY,
}

impl Symmetry {
    pub fn apply(&self, d: &G2ChordData) -> G2ChordData {
        match self {
            Symmetry::Identity => *d,
            Symmetry::ReflectX => d.reflect_x(),
            Symmetry::ReflectY => d.reflect_y(),
            Symmetry::ReflectXY => d.reversed(),
        }
    }

    pub fn apply_chord(&self, c: &ChordData) -> ChordData {
        match self {
            Symmetry::Identity => *c,
            Symmetry::ReflectX => c.reflect_x(),
            Symmetry::ReflectY => c.reflect_y(),
            Symmetry::ReflectXY => c.reversed(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedBounds {
    pub tau1: f64,
    pub tau2: f64,
    pub a1: f64,
    pub b2: f64,
    pub b1: f64,
    pub a2: f64,
    pub omega: f64,
    pub gamma: f64,
    pub xi1: f64,
    pub xi2: f64,
}

/// Length bounds, as lengths and as ratios to the chord `2c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthBounds {
    pub outer_lower: f64,
    pub lower: f64,
    pub upper: f64,
    pub outer_upper: f64,
    pub chord: f64,
    pub symmetry: Symmetry,
}

impl LengthBounds {
    pub fn ratios(&self) -> [f64; 4] {
        [self.outer_lower, self.lower, self.upper, self.outer_upper].map(|v| v / self.chord)
    }
}

fn arccot(v: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 - v.atan()
}

fn angle_case(c: &ChordData) -> Result<Symmetry> {
    let (a, b) = (c.alpha, c.beta);
    let e = EPS;
    if b > -a + e && -a > e {
        Ok(Symmetry::Identity)
    } else if b < -a - e && -a < -e {
        Ok(Symmetry::ReflectX)
    } else if a > -b + e && -b > e {
        Ok(Symmetry::ReflectXY)
    } else if a < -b - e && -b < -e {
        Ok(Symmetry::ReflectY)
    } else {
        Err(Error::NonConvex(format!(
            "end tangents ({a}, {b}) fit none of the convex spiral cases"
        )))
    }
}

fn curvature_case(d: &G2ChordData) -> Result<Symmetry> {
    let e = EPS * (1.0 + d.k1.abs().max(d.k2.abs()));
    let (k1, k2) = (d.k1, d.k2);
    if (k2 - k1).abs() <= e {
        return Err(Error::Unsupported(
            "equal end curvatures: a circle, not a spiral".into(),
        ));
    }
    let nonneg = k1 >= -e && k2 >= -e;
    let nonpos = k1 <= e && k2 <= e;
    let sym = match (k1 < k2, nonneg, nonpos) {
        (true, true, _) => Symmetry::Identity,
        (true, false, true) => Symmetry::ReflectXY,
        (false, _, true) => Symmetry::ReflectX,
        (false, true, false) => Symmetry::ReflectY,
        _ => {
            return Err(Error::NonConvex(format!(
                "end curvatures {k1} and {k2} change sign"
            )))
        }
    };
    Ok(sym)
}

/// Brings convex spiral data to the increasing, non-negative curvature case.
pub fn normalize_case(d: &G2ChordData) -> Result<(NormalizedBounds, Symmetry)> {
    let sym = curvature_case(d)?;
    let by_angle = angle_case(&d.chord)?;
    if sym != by_angle {
        return Err(Error::NonConvex(format!(
            "curvatures suggest {sym:?} but tangents suggest {by_angle:?}"
        )));
    }
    let n = sym.apply(d);
    let c = n.chord.c;
    let (tau1, tau2) = (n.chord.alpha, n.chord.beta);
    let (a1, b2) = ((n.k1 * c).max(0.0), n.k2 * c);
    let omega = 0.5 * (tau1 + tau2);
    let gamma = 0.5 * (tau1 - tau2);
    let sg2 = gamma.sin().powi(2);
    let b1 = (a1 * tau2.sin() - sg2) / (a1 + tau1.sin());
    let a2 = -(b2 * tau1.sin() + sg2) / (b2 - tau2.sin());
    let xi1 = arccot((a1 * omega.cos() + gamma.sin()) / (-a1 * omega.sin()));
    let xi2 = arccot((b2 * omega.cos() + gamma.sin()) / (b2 * omega.sin()));
    Ok((
        NormalizedBounds {
            tau1,
            tau2,
            a1,
            b2,
            b1,
            a2,
            omega,
            gamma,
            xi1,
            xi2,
        },
        sym,
    ))
}

fn outer_ratios(tau1: f64, tau2: f64) -> (f64, f64) {
    let omega = 0.5 * (tau1 + tau2);
    let gamma = 0.5 * (tau1 - tau2);
    let sg = gamma.sin();
    (
        tau1 / tau1.sin(),
        (gamma * tau1.sin() - omega.sin() * sg) / (sg * sg),
    )
}

/// Bounds from G² data: the inner pair accounts for end curvatures, the outer pair for
/// tangents only.
pub fn length_bounds(d: &G2ChordData) -> Result<LengthBounds> {
    let (nb, sym) = normalize_case(d)?;
    let chord = 2.0 * d.chord.c;
    let (ol, ou) = outer_ratios(nb.tau1, nb.tau2);
    let upper = if nb.a1 <= 1e-12 {
        ou
    } else {
        nb.xi1 / nb.a1 - (nb.gamma + nb.xi1) / nb.b1
    };
    let lower = if nb.a2.abs() <= 1e-12 {
        ou
    } else {
        -(nb.gamma + nb.xi2) / nb.a2 + nb.xi2 / nb.b2
    };
    Ok(LengthBounds {
        outer_lower: ol * chord,
        lower: lower * chord,
        upper: upper * chord,
        outer_upper: ou * chord,
        chord,
        symmetry: sym,
    })
}

/// Bounds from G¹ data; the inner pair coincides with the outer one.
pub fn angle_length_bounds(c: &ChordData) -> Result<LengthBounds> {
    let sym = angle_case(c)?;
    let n = sym.apply_chord(c);
    let (ol, ou) = outer_ratios(n.alpha, n.beta);
    let chord = 2.0 * c.c;
    Ok(LengthBounds {
        outer_lower: ol * chord,
        lower: ol * chord,
        upper: ou * chord,
        outer_upper: ou * chord,
        chord,
        symmetry: sym,
    })
}
