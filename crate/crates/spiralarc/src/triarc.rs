//! Spiral triarcs inscribed in the bilens, built in the concentric picture of the
//! end curvature circles.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::biarc::BiarcParams;
use crate::bilens::boundary_parameters;
use crate::curve::{arc_param, PiecewiseConstCurve, Segment};
use crate::error::{invalid, Error, Result};
use crate::geom::{menger_curvature, unit, wrap_angle, Circle, G2ChordData, Point, Pose};
use crate::mobius::{Branch, MobiusMap};
use crate::roots::{bisect, RootOptions};

/// Three arcs with curvatures `k₁`, `k_mid`, `k₂` joining the end data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triarc {
    pub t: f64,
    pub start: Pose,
    pub segments: [Segment; 3],
    /// Tangent mismatch at the first and second joins, in radians.
    pub tangent_gaps: [f64; 2],
}

impl Triarc {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.l).sum()
    }

    pub fn curvatures(&self) -> [f64; 3] {
        [self.segments[0].k, self.segments[1].k, self.segments[2].k]
    }

    pub fn to_curve(&self) -> PiecewiseConstCurve {
        PiecewiseConstCurve {
            start: self.start,
            segments: self.segments.to_vec(),
        }
    }

    /// Distance between the traced end and the chord end `B`, plus the tangent mismatch there.
    pub fn closure_gap(&self, d: &G2ChordData) -> (f64, f64) {
        let e = self.to_curve().end();
        (
            (e.point - d.chord.b()).norm(),
            wrap_angle(e.tau - d.chord.beta).abs(),
        )
    }
}

/// One-parameter family of spiral triarcs for fixed G² data; `t = 0` is the biarc at `p₂`,
/// `t = 1` the biarc at `p₁`.
#[derive(Clone, Debug, Serialize)]
pub struct TriarcFamily {
    pub data: G2ChordData,
    pub map: MobiusMap,
    pub p1: f64,
    pub p2: f64,
    /// Common centre of the image circles.
    pub center: Point,
    /// Signed radii of the images of the start and end curvature circles.
    pub radii: [f64; 2],
    /// Distance between the two fitted image centres.
    pub concentric_gap: f64,
    phi_a: f64,
    sweep: f64,
    turn1_max: f64,
    turn3_max: f64,
}

fn three_points(start: Pose, k: f64, scale: f64) -> [Point; 3] {
    let ds = if k == 0.0 {
        4.0 * scale
    } else {
        (TAU / 3.0 / k.abs()).min(4.0 * scale)
    };
    let seg = Segment::new(k, 0.0);
    [0.0, ds, 2.0 * ds].map(|s| seg.point_from(start, s))
}

impl TriarcFamily {
    pub fn new(d: &G2ChordData, branch: Branch) -> Result<Self> {
        let map = MobiusMap::concentric(d, branch)?;
        let (p1, p2) = boundary_parameters(d)?;
        let c = d.chord.c;
        let k1_img = map.map_circle(three_points(d.chord.start(), d.k1, c))?;
        let back = three_points(d.chord.end().reversed(), -d.k2, c);
        let k2_img = map.map_circle([back[2], back[1], back[0]])?;
        let gap = (k1_img.center - k2_img.center).norm();
        let center = 0.5 * (k1_img.center + k2_img.center);
        let (r1, r2) = (k1_img.radius, k2_img.radius);
        if r1.signum() != r2.signum() {
            return Err(Error::Numerical("image circles have opposite orientation".into()));
        }

        let b1 = BiarcParams::new(d.chord, p1)?;
        let b2 = BiarcParams::new(d.chord, p2)?;
        let j1 = map.apply(b1.join_point());
        let phi_a = (map.apply(d.chord.a()) - center).arg();
        let dphi = (j1 - center).arg() - phi_a;
        let sweep = if r1 > 0.0 {
            dphi.rem_euclid(TAU)
        } else {
            (-dphi).rem_euclid(TAU)
        };
        Ok(TriarcFamily {
            data: *d,
            map,
            p1,
            p2,
            center,
            radii: [r1, r2],
            concentric_gap: gap,
            phi_a,
            sweep,
            turn1_max: b1.turnings().0.abs(),
            turn3_max: b2.turnings().1.abs(),
        })
    }

    /// First branch that produces a consistent family.
    pub fn build(d: &G2ChordData) -> Result<Self> {
        let mut last = None;
        for br in [Branch::Plus, Branch::Minus] {
            match TriarcFamily::new(d, br) {
                Ok(f) => {
                    let ok = [0.0, 0.5, 1.0].iter().all(|&t| {
                        f.at(t).is_ok_and(|tr| {
                            let (gp, ga) = tr.closure_gap(d);
                            gp <= 1e-8 * d.chord.c && ga <= 1e-8
                        })
                    });
                    if ok {
                        return Ok(f);
                    }
                    last = Some(Error::Numerical(format!(
                        "branch {br:?} does not close the triarc"
                    )));
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| Error::Numerical("no branch".into())))
    }

    /// Transition points in the concentric picture: on the start image, the midpoint and
    /// the point on the end image.
    fn transition_images(&self, t: f64) -> [Point; 3] {
        let [r1, r2] = self.radii;
        let s = r1.signum();
        let phi = self.phi_a + s * t * self.sweep;
        let n = -unit(phi) * s;
        let rho = 0.5 * (r1 + r2);
        let ctr = self.center + n * (0.5 * (r2 - r1));
        let n_mid = n * unit(rho.signum() * FRAC_PI_2);
        [self.center - n * r1, ctr - n_mid * rho, self.center + n * r2]
    }

    pub fn at(&self, t: f64) -> Result<Triarc> {
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid("triarc parameter must lie in [0, 1]"));
        }
        let d = &self.data;
        let [m_img, mid_img, n_img] = self.transition_images(t);
        let m = self.map.inverse(m_img);
        let mid = self.map.inverse(mid_img);
        let n = self.map.inverse(n_img);
        let k_mid = menger_curvature(m, mid, n);
        let tol = 1e-12 * d.chord.c;

        let start = d.chord.start();
        let mut l1 = if (m - start.point).norm() <= tol {
            0.0
        } else {
            arc_param(start, d.k1, m)
        };
        if (d.k1 * l1).abs() > self.turn1_max + 1e-9 || l1 < 0.0 {
            l1 = 0.0;
        }
        let back = d.chord.end().reversed();
        let mut l3 = if (n - back.point).norm() <= tol {
            0.0
        } else {
            arc_param(back, -d.k2, n)
        };
        if (d.k2 * l3).abs() > self.turn3_max + 1e-9 || l3 < 0.0 {
            l3 = 0.0;
        }
        let seg1 = Segment::new(d.k1, l1);
        let pm = seg1.end_from(start);
        let l2 = if (n - pm.point).norm() <= tol {
            0.0
        } else {
            arc_param(pm, k_mid, n)
        };
        let seg2 = Segment::new(k_mid, l2);
        let seg3 = Segment::new(d.k2, l3);

        // Tangent of the transition circle at M and N against the neighbouring arcs.
        let pn_tau = d.chord.beta - seg3.turning();
        let gaps = transition_tangents(m, mid, n, k_mid)
            .map(|[tm, tn]| {
                [
                    wrap_angle(tm - pm.tau).abs(),
                    wrap_angle(tn - pn_tau).abs(),
                ]
            })
            .unwrap_or([0.0, 0.0]);
        Ok(Triarc {
            t,
            start,
            segments: [seg1, seg2, seg3],
            tangent_gaps: gaps,
        })
    }

    pub fn length_at(&self, t: f64) -> Result<f64> {
        Ok(self.at(t)?.length())
    }
}

/// Tangent directions at the first and last of three points on a circle, in their order.
fn transition_tangents(m: Point, mid: Point, n: Point, k: f64) -> Option<[f64; 2]> {
    if (k * (n - m).norm()).abs() < 1e-8 {
        let a = (n - m).arg();
        return Some([a, a]);
    }
    let circ = Circle::through(m, mid, n).ok()?;
    let s = circ.radius.signum();
    // Left normal points to the centre for a left turn.
    let tan = |p: Point| ((circ.center - p) * s * Point::new(0.0, -1.0)).arg();
    Some([tan(m), tan(n)])
}

/// Triarc of the family at parameter `t`.
pub fn inscribed_triarc(d: &G2ChordData, t: f64) -> Result<Triarc> {
    TriarcFamily::build(d)?.at(t)
}

/// Triarc of prescribed length.
pub fn solve_length_triarc(d: &G2ChordData, length: f64) -> Result<Triarc> {
    let fam = TriarcFamily::build(d)?;
    fam.solve_length(length)
}

impl TriarcFamily {
    pub fn solve_length(&self, length: f64) -> Result<Triarc> {
        let f = |t: f64| self.length_at(t).map(|l| l - length).unwrap_or(f64::NAN);
        let (f0, f1) = (f(0.0), f(1.0));
        let (lo, hi) = (f0.min(f1) + length, f0.max(f1) + length);
        let tol = 1e-12 * length;
        if f0.abs() <= tol {
            return self.at(0.0);
        }
        if f1.abs() <= tol {
            return self.at(1.0);
        }
        const N: usize = 64;
        let mut prev = (0.0, f0);
        for i in 1..=N {
            let t = i as f64 / N as f64;
            let ft = f(t);
            if prev.1 * ft <= 0.0 {
                let r = bisect(
                    f,
                    prev.0,
                    t,
                    RootOptions {
                        f_tol: tol,
                        x_tol: 1e-16,
                        max_iter: 200,
                    },
                )?;
                return self.at(r.x);
            }
            prev = (t, ft);
        }
        Err(Error::LengthOutOfRange {
            length,
            lower: lo,
            upper: hi,
            bound: if length < lo {
                crate::error::Bound::Lower
            } else {
                crate::error::Bound::Upper
            },
        })
    }
}
