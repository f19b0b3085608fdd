//! The region between the two boundary biarcs whose outer arcs lie on the end curvature circles.

use serde::Serialize;

use crate::biarc::{Biarc, BiarcParams};
use crate::error::{invalid, Error, Result};
use crate::geom::{is_short_spiral_or_biarc_data, q_invariant, G2ChordData, Point, EPS};
use crate::region::ArcLoop;

/// Largest turning of a boundary piece in the point-in-region test.
pub const DEFAULT_MAX_ANGLE: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct Bilens {
    pub data: G2ChordData,
    pub p1: f64,
    pub p2: f64,
    /// Biarc whose first arc lies on the start curvature circle.
    pub first: Biarc,
    /// Biarc whose second arc lies on the end curvature circle.
    pub second: Biarc,
    #[serde(skip)]
    region: ArcLoop,
}

/// Parameters of the biarcs sharing their first, resp. second, arc with the end curvature circles.
pub fn boundary_parameters(d: &G2ChordData) -> Result<(f64, f64)> {
    let ch = &d.chord;
    let so = ch.omega().sin();
    if so.abs() < EPS {
        return Err(Error::DegenerateLens);
    }
    let p1 = -so / (d.k1 * ch.c + ch.alpha.sin());
    let p2 = (d.k2 * ch.c - ch.beta.sin()) / so;
    Ok((p1, p2))
}

impl Bilens {
    /// Both boundary parameters are invariant under reflection in the chord, so
    /// decreasing-curvature data is handled by the same formulas.
    pub fn from_g2(d: &G2ChordData) -> Result<Self> {
        Bilens::with_max_angle(d, DEFAULT_MAX_ANGLE)
    }

    pub fn with_max_angle(d: &G2ChordData, max_angle: f64) -> Result<Self> {
        if !is_short_spiral_or_biarc_data(d, EPS)? {
            return Err(invalid(format!(
                "data does not admit a short spiral (Q = {})",
                q_invariant(d)
            )));
        }
        let (p1, p2) = boundary_parameters(d)?;
        if !(p1 > 0.0 && p2 > 0.0) {
            return Err(invalid("boundary biarcs are not short"));
        }
        let first = Biarc::new(BiarcParams::new(d.chord, p1)?);
        let second = Biarc::new(BiarcParams::new(d.chord, p2)?);
        let region = ArcLoop::new(
            &[
                (first.start, &first.segments[..]),
                (second.to_curve().reversed().start, &reversed_segments(&second)),
            ],
            max_angle,
        );
        Ok(Bilens {
            data: *d,
            p1,
            p2,
            first,
            second,
            region,
        })
    }

    /// Whether the data is itself realized by a biarc (`p₁ = p₂`).
    pub fn is_degenerate(&self) -> bool {
        (self.p2 - self.p1).abs() <= EPS * self.p1.max(1.0)
    }

    /// Width of the bilens measured across the inscribed family.
    pub fn width(&self) -> f64 {
        let ch = &self.data.chord;
        let (p1, p2) = (self.p1, self.p2);
        let a2 = BiarcParams { chord: *ch, p: p2 }.normalized_curvatures().0;
        let b1 = BiarcParams { chord: *ch, p: p1 }.normalized_curvatures().1;
        let pp = 1.0 + 2.0 * p2 * ch.gamma().cos() + p1 * p2;
        let disc = pp * pp + 4.0 * p2 * (p2 - p1) * a2 * b1;
        4.0 * ch.c * (p2 - p1) * ch.omega().sin().abs() / (pp + disc.max(0.0).sqrt())
    }

    /// Closed inclusion test; `tol` widens the region outward.
    pub fn encloses_point(&self, x: Point, tol: f64) -> bool {
        self.region().contains(x, tol)
    }

    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        self.region().distance_to_boundary(x)
    }

    /// Polygon through the boundary breakpoints at the configured angular step.
    pub fn boundary_polygon(&self) -> Vec<Point> {
        self.region().polygon().to_vec()
    }

    fn region(&self) -> &ArcLoop {
        &self.region
    }
}

fn reversed_segments(b: &Biarc) -> Vec<crate::curve::Segment> {
    b.to_curve().reversed().segments
}
