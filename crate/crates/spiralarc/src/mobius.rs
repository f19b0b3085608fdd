//! Möbius map fixing the chord ends and sending the two end curvature circles to
//! concentric circles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bilens::boundary_parameters;
use crate::error::{invalid, Error, Result};
use crate::geom::{q_invariant, unit, Circle, G2ChordData, Point, EPS};

/// Which of the two concentric normalizations to use; the radius ratio of the images is
/// `κ⁺` or `κ⁻`, with `κ⁺κ⁻ = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

/// `w(z) = c·(z₀ + z/c)/(1 + z₀z/c)`. Fixes `±c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub z0: Complex64,
    pub c: f64,
    pub kappa: f64,
    pub branch: Branch,
}

pub fn kappa(q: f64, branch: Branch) -> f64 {
    let (a, b) = ((1.0 - q).sqrt(), (-q).sqrt());
    match branch {
        Branch::Plus => (a + b).powi(2),
        Branch::Minus => (a - b).powi(2),
    }
}

impl MobiusMap {
    pub fn concentric(d: &G2ChordData, branch: Branch) -> Result<Self> {
        let q = q_invariant(d);
        if !(q < -EPS) {
            return Err(invalid(format!(
                "concentric map needs intersection-free end circles (Q = {q})"
            )));
        }
        let (p1, p2) = boundary_parameters(d)?;
        if !(p1 * p2 > 0.0) {
            return Err(invalid("boundary parameters of opposite sign"));
        }
        let ch = &d.chord;
        let kap = kappa(q, branch);
        let r0 = (kap / (p1 * p2)).sqrt();
        let cot_w = ch.omega().cos() / ch.omega().sin();
        let lambda0 = PI - ch.gamma() + ((kap - 1.0) / (kap + 1.0) * cot_w).atan();
        let e = unit(lambda0) * r0;
        let z0 = (e - 1.0) / (e + 1.0);
        if !(z0.re.is_finite() && z0.im.is_finite()) {
            return Err(Error::Numerical("concentric map parameter is not finite".into()));
        }
        Ok(MobiusMap {
            z0,
            c: ch.c,
            kappa: kap,
            branch,
        })
    }

    pub fn apply(&self, z: Point) -> Point {
        let zn = z / self.c;
        (self.z0 + zn) / (1.0 + self.z0 * zn) * self.c
    }

    pub fn inverse(&self, w: Point) -> Point {
        let wn = w / self.c;
        (wn - self.z0) / (1.0 - self.z0 * wn) * self.c
    }

    /// `w'(z)`.
    pub fn derivative(&self, z: Point) -> Complex64 {
        let zn = z / self.c;
        let den = 1.0 + self.z0 * zn;
        (1.0 - self.z0 * self.z0) / (den * den)
    }

    /// Direction of the image of a tangent at `z`.
    pub fn map_direction(&self, z: Point, tau: f64) -> f64 {
        tau + self.derivative(z).arg()
    }

    /// Image of the circle through three points, oriented by their order.
    pub fn map_circle(&self, pts: [Point; 3]) -> Result<Circle> {
        Circle::through(self.apply(pts[0]), self.apply(pts[1]), self.apply(pts[2]))
    }
}
