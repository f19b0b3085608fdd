//! Where can a spiral arc of given end curvatures and length end?
//!
//! Curvature is modelled by two constant levels `q₁`, `q₂` between `k₁` and `k₂`; the
//! endpoint cloud is compared with the bounding curves `Γ₁` (single arcs) and `Γ₂`
//! (extreme biarcs).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{z1, z2};
use crate::error::{invalid, Error, Result};
use crate::exec::{flat_map_indexed, map_slice, Exec};
use crate::fit::{least_squares_multistart, Fit};
use crate::geom::{cross, unit, Point, Pose};
use crate::region::{distance_to_segment, polygon_area, self_crossings, PolygonIndex};

pub const DEFAULT_GRID: usize = 64;

/// Spiral arcs starting at `start` with curvature running from `k1` to `k2` over `length`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralModel {
    pub k1: f64,
    pub k2: f64,
    pub length: f64,
    pub start: Pose,
}

impl SpiralModel {
    pub fn new(k1: f64, k2: f64, length: f64) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite()) {
            return Err(invalid("curvatures must be finite"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid("length must be positive"));
        }
        if k1 == k2 {
            return Err(Error::Unsupported("equal end curvatures".into()));
        }
        Ok(SpiralModel {
            k1,
            k2,
            length,
            start: Pose::origin(0.0),
        })
    }

    pub fn with_start(mut self, start: Pose) -> Self {
        self.start = start;
        self
    }

    fn world(&self, z: Point) -> Point {
        self.start.point + unit(self.start.tau) * z
    }

    fn local(&self, x: Point) -> Point {
        (x - self.start.point) * unit(-self.start.tau)
    }

    /// Endpoint of the single arc of curvature `q`.
    pub fn gamma1(&self, q: f64) -> Point {
        self.world(z1(q, self.length))
    }

    /// Endpoint of the biarc whose second arc, of curvature `k₂`, has length `t`.
    pub fn gamma2(&self, t: f64) -> Point {
        let l = self.length;
        self.world(z2(self.k1, l - t, self.k2, t))
    }

    /// Turning range `(k₁L, k₂L)`, in increasing order.
    pub fn turning_range(&self) -> (f64, f64) {
        let (a, b) = (self.k1 * self.length, self.k2 * self.length);
        (a.min(b), a.max(b))
    }

    /// Split where a fixed-turning boundary switches from the first family to the second.
    fn turning_split(&self, theta: f64) -> f64 {
        (theta - self.k1 * self.length) / (self.k2 - self.k1)
    }
}

/// Model curve: arcs `(q₁, l₁)` then `(q₂, l₂)`, and where it ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub point: Point,
    pub q1: f64,
    pub l1: f64,
    pub q2: f64,
    pub l2: f64,
}

impl ModelPoint {
    pub fn turning(&self) -> f64 {
        self.q1 * self.l1 + self.q2 * self.l2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryKind {
    /// Single arcs, parametrized by curvature.
    Gamma1,
    /// Biarcs with the extreme curvatures, parametrized by the second length.
    Gamma2,
    /// Fixed turning, second curvature at its extreme.
    TurningFirst { theta: f64 },
    /// Fixed turning, first curvature at its extreme.
    TurningSecond { theta: f64 },
}

/// Sampled boundary curve; `params` run in the order the closed loop is traversed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub kind: BoundaryKind,
    pub params: Vec<f64>,
    pub points: Vec<Point>,
}

impl BoundaryCurve {
    fn sample(model: &SpiralModel, kind: BoundaryKind, from: f64, to: f64, n: usize) -> Self {
        let params: Vec<f64> = (0..=n)
            .map(|i| from + (to - from) * i as f64 / n as f64)
            .collect();
        let points = params.iter().map(|&s| eval(model, kind, s)).collect();
        BoundaryCurve {
            kind,
            params,
            points,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            BoundaryKind::Gamma1 => "gamma1",
            BoundaryKind::Gamma2 => "gamma2",
            BoundaryKind::TurningFirst { .. } => "turning-first",
            BoundaryKind::TurningSecond { .. } => "turning-second",
        }
    }
}

fn eval(m: &SpiralModel, kind: BoundaryKind, s: f64) -> Point {
    let l = m.length;
    match kind {
        BoundaryKind::Gamma1 => m.gamma1(s),
        BoundaryKind::Gamma2 => m.gamma2(s),
        BoundaryKind::TurningFirst { theta } => {
            let q = (theta - m.k2 * s) / (l - s);
            m.world(z2(q, l - s, m.k2, s))
        }
        BoundaryKind::TurningSecond { theta } => {
            let q = (theta - m.k1 * (l - s)) / s;
            m.world(z2(m.k1, l - s, q, s))
        }
    }
}

/// Endpoint cloud with its conjectured boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointSet {
    pub model: SpiralModel,
    /// Prescribed turning, for fixed-turning subsets.
    pub theta: Option<f64>,
    pub points: Vec<ModelPoint>,
    pub bounds: Vec<BoundaryCurve>,
    /// The boundary loop crosses itself; containment then follows the even-odd rule.
    pub self_intersecting: bool,
}

/// How well the boundary loop encloses the cloud.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnclosureReport {
    pub total: usize,
    pub outside: usize,
    /// Largest distance from an outside point to the boundary.
    pub max_excess: f64,
    pub self_intersecting: bool,
}

fn boundary_samples(grid: usize) -> usize {
    (8 * grid).max(512)
}

fn check_grid(grid: usize) -> Result<()> {
    if grid == 0 {
        Err(invalid("grid must have at least one step"))
    } else {
        Ok(())
    }
}

fn finish(
    model: &SpiralModel,
    theta: Option<f64>,
    points: Vec<ModelPoint>,
    bounds: Vec<BoundaryCurve>,
) -> EndpointSet {
    let mut set = EndpointSet {
        model: *model,
        theta,
        points,
        bounds,
        self_intersecting: false,
    };
    // Boundary pieces can meet tangentially, where their samples cross spuriously.
    let poly = set.boundary_loop();
    let spacing = (0..poly.len())
        .map(|i| (poly[(i + 1) % poly.len()] - poly[i]).norm())
        .fold(0.0, f64::max);
    let near = 4.0 * spacing;
    let junctions: Vec<Point> = set.bounds.iter().map(|b| b.points[0]).collect();
    set.self_intersecting = self_crossings(&poly)
        .iter()
        .any(|x| junctions.iter().all(|j| (x - j).norm() > near));
    set
}

/// Endpoints of all two-level curves on a `grid`-step lattice in `(q₁, q₂, l₁)`, with
/// `q₂` between `q₁` and `k₂`.
pub fn endpoint_set(model: &SpiralModel, grid: usize, exec: Exec) -> Result<EndpointSet> {
    check_grid(grid)?;
    let g = grid as f64;
    let (k1, k2, l) = (model.k1, model.k2, model.length);
    let points = flat_map_indexed(exec, grid + 1, |i| {
        let q1 = k1 + (k2 - k1) * i as f64 / g;
        let mut out = Vec::with_capacity((grid + 1) * (grid + 1));
        for j in 0..=grid {
            let q2 = q1 + (k2 - q1) * j as f64 / g;
            for m in 0..=grid {
                let l1 = l * m as f64 / g;
                out.push(ModelPoint {
                    point: model.world(z2(q1, l1, q2, l - l1)),
                    q1,
                    l1,
                    q2,
                    l2: l - l1,
                });
            }
        }
        out
    });
    let n = boundary_samples(grid);
    let bounds = vec![
        BoundaryCurve::sample(model, BoundaryKind::Gamma1, k1, k2, n),
        BoundaryCurve::sample(model, BoundaryKind::Gamma2, l, 0.0, n),
    ];
    Ok(finish(model, None, points, bounds))
}

/// Endpoints of two-level curves with total turning `theta`, over a `grid`-step lattice in
/// `(q₁, q₂)`; `l₁` follows from the turning.
pub fn fixed_turning_subset(
    model: &SpiralModel,
    theta: f64,
    grid: usize,
    exec: Exec,
) -> Result<EndpointSet> {
    check_grid(grid)?;
    let (lo, hi) = model.turning_range();
    if !(theta > lo && theta < hi) {
        return Err(invalid(format!(
            "turning {theta} outside the open range ({lo}, {hi})"
        )));
    }
    let g = grid as f64;
    let (k1, k2, l) = (model.k1, model.k2, model.length);
    let points = flat_map_indexed(exec, grid + 1, |i| {
        let q1 = k1 + (k2 - k1) * i as f64 / g;
        let mut out = Vec::new();
        for j in 0..=grid {
            let q2 = q1 + (k2 - q1) * j as f64 / g;
            let l1 = if q1 == q2 {
                if (q1 * l - theta).abs() > 1e-12 * theta.abs().max(1.0) {
                    continue;
                }
                l
            } else {
                (theta - q2 * l) / (q1 - q2)
            };
            if !(0.0..=l).contains(&l1) {
                continue;
            }
            out.push(ModelPoint {
                point: model.world(z2(q1, l1, q2, l - l1)),
                q1,
                l1,
                q2,
                l2: l - l1,
            });
        }
        out
    });
    let n = boundary_samples(grid);
    let ts = model.turning_split(theta);
    let bounds = vec![
        BoundaryCurve::sample(model, BoundaryKind::TurningFirst { theta }, 0.0, ts, n),
        BoundaryCurve::sample(model, BoundaryKind::TurningSecond { theta }, ts, l, n),
    ];
    Ok(finish(model, Some(theta), points, bounds))
}

impl EndpointSet {
    /// Closed boundary polygon, without repeated junction points.
    pub fn boundary_loop(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for b in &self.bounds {
            let skip = usize::from(!out.is_empty());
            out.extend(b.points.iter().skip(skip));
        }
        if out.len() > 1 {
            out.pop();
        }
        out
    }

    /// Counts cloud points farther than `tol` outside the boundary, measuring against
    /// the exact boundary curves rather than their samples.
    pub fn enclosure(&self, tol: f64, exec: Exec) -> EnclosureReport {
        let poly = self.boundary_loop();
        let orient = polygon_area(&poly).signum();
        let index = PolygonIndex::new(poly);
        let excess = map_slice(exec, &self.points, |p| {
            if index.contains(p.point) {
                0.0
            } else {
                self.outside_distance(p.point, orient)
            }
        });
        let mut outside = 0;
        let mut max_excess: f64 = 0.0;
        for e in excess {
            if e > tol {
                outside += 1;
                max_excess = max_excess.max(e);
            }
        }
        EnclosureReport {
            total: self.points.len(),
            outside,
            max_excess,
            self_intersecting: self.self_intersecting,
        }
    }

    /// Cloud points farther than `tol` outside the boundary, with their distance.
    pub fn outside_points(&self, tol: f64) -> Vec<(ModelPoint, f64)> {
        let poly = self.boundary_loop();
        let orient = polygon_area(&poly).signum();
        let index = PolygonIndex::new(poly);
        self.points
            .iter()
            .filter(|p| !index.contains(p.point))
            .map(|p| (*p, self.outside_distance(p.point, orient)))
            .filter(|(_, d)| *d > tol)
            .collect()
    }

    /// Distance to the boundary if `x` lies outside the exact boundary, else zero.
    fn outside_distance(&self, x: Point, orient: f64) -> f64 {
        let mut best = (f64::INFINITY, 0, 0);
        for (c, b) in self.bounds.iter().enumerate() {
            for (i, w) in b.points.windows(2).enumerate() {
                let d = distance_to_segment(x, w[0], w[1]);
                if d < best.0 {
                    best = (d, c, i);
                }
            }
        }
        let (_, c, i) = best;
        let b = &self.bounds[c];
        let ps = &b.params;
        let lo = ps[i.saturating_sub(1)];
        let hi = ps[(i + 2).min(ps.len() - 1)];
        let f = |s: f64| eval(&self.model, b.kind, s);
        let s = golden_min(|s| (f(s) - x).norm_sqr(), lo, hi);
        let foot = f(s);
        let d = (x - foot).norm();
        let h = 1e-6 * (ps[ps.len() - 1] - ps[0]).abs();
        let (sa, sb) = (
            (s - h).clamp(lo.min(hi), lo.max(hi)),
            (s + h).clamp(lo.min(hi), lo.max(hi)),
        );
        let dir = if hi > lo { 1.0 } else { -1.0 };
        let tangent = (f(sb) - f(sa)) * dir;
        if orient * cross(tangent, x - foot) > 0.0 {
            0.0
        } else {
            d
        }
    }
}

fn golden_min(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Largest deviation of `Γ₁` samples from the polar curve `p(φ) = L sin φ/φ`, taken in
/// the start frame. Each sample picks the polar branch `arg + mπ` that fits it best.
pub fn cochleoid_residual(model: &SpiralModel, samples: usize) -> f64 {
    let l = model.length;
    let reach = (model.k1.abs().max(model.k2.abs()) * l / (2.0 * PI)).ceil() as i32 + 2;
    let mut worst: f64 = 0.0;
    for i in 0..=samples {
        let q = model.k1 + (model.k2 - model.k1) * i as f64 / samples as f64;
        let x = model.local(model.gamma1(q));
        let (r, a) = (x.norm(), x.arg());
        let best = (-reach..=reach)
            .map(|m| {
                let phi = a + m as f64 * PI;
                let rho = if m % 2 == 0 { r } else { -r };
                let p = if phi == 0.0 { l } else { l * phi.sin() / phi };
                (rho - p).abs()
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycloidClass {
    Hypocycloid,
    Epicycloid,
    Involute,
    Cycloid,
}

/// Canonical curve fitted to `Γ₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFit {
    pub class: CycloidClass,
    /// Radius of the fixed circle (the rolling radius for a cycloid).
    pub fixed_radius: f64,
    pub rolling_radius: Option<f64>,
    /// Roll angle per unit of the `Γ₂` parameter.
    pub rate: f64,
    pub max_residual: f64,
    /// Residual of every candidate family tried.
    pub candidates: Vec<(CycloidClass, f64)>,
}

fn residuals<'a>(
    ts: &'a [f64],
    canon: &'a [Point],
    model: impl Fn(&[f64], f64) -> Point + 'a,
) -> impl Fn(&[f64], &mut [f64]) + 'a {
    move |p, r| {
        for (i, (&t, z)) in ts.iter().zip(canon).enumerate() {
            let d = model(p, t) - z;
            r[2 * i] = d.re;
            r[2 * i + 1] = d.im;
        }
    }
}

fn roulette(r_fixed: f64, r: f64, th: f64) -> Point {
    unit(th) * (r_fixed - r) + unit(-(r_fixed - r) / r * th) * r
}

fn involute(r_fixed: f64, th: f64) -> Point {
    unit(th) * Point::new(1.0, -th) * r_fixed
}

fn cycloid(r: f64, th: f64) -> Point {
    Point::new(th - th.sin(), 1.0 - th.cos()) * r
}

/// Fits `Γ₂` to a cycloidal curve after moving it to canonical position: origin at the
/// start curvature centre, turned by `k₁L − π/2`, so the curve starts at a cusp on the
/// positive real axis. With `k₁ = 0` the frame is that of a cycloid rolling on the start
/// tangent. Negative curvatures are mirrored first.
pub fn gamma2_canonical_check(model: &SpiralModel, samples: usize) -> Result<CanonicalFit> {
    if samples < 8 {
        return Err(invalid("need at least 8 samples"));
    }
    let (k1, k2) = (model.k1, model.k2);
    let mirror = k1 < 0.0 || (k1 == 0.0 && k2 < 0.0);
    let (k1, k2) = if mirror { (-k1, -k2) } else { (k1, k2) };
    if k2 < 0.0 {
        return Err(Error::Unsupported(
            "end curvatures of opposite sign".into(),
        ));
    }
    let l = model.length;
    let ts: Vec<f64> = (0..=samples).map(|i| l * i as f64 / samples as f64).collect();
    let raw: Vec<Point> = ts
        .iter()
        .map(|&t| {
            let z = model.local(model.gamma2(t));
            if mirror {
                z.conj()
            } else {
                z
            }
        })
        .collect();
    let canon: Vec<Point> = if k1 == 0.0 {
        raw.iter().map(|z| l - z.conj()).collect()
    } else {
        let rot = unit(-(k1 * l - 0.5 * PI));
        raw.iter()
            .map(|z| (z - Point::new(0.0, 1.0 / k1)) * rot)
            .collect()
    };

    let m = 2 * ts.len();
    let path_len: f64 = canon.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let rates = |scale: f64| -> Vec<f64> {
        let base = path_len / (l * scale.max(1e-300));
        let mut out = Vec::new();
        for e in -4..=4 {
            let w = base * 2f64.powi(e);
            out.push(w);
            out.push(-w);
        }
        out
    };

    let mut candidates = Vec::new();
    let mut best: Option<(CycloidClass, Fit)> = None;
    let mut consider = |class: CycloidClass, fit: Option<Fit>| {
        if let Some(fit) = fit {
            candidates.push((class, fit.max_residual));
            if best.as_ref().is_none_or(|(_, b)| fit.max_residual < b.max_residual) {
                best = Some((class, fit));
            }
        }
    };

    if k1 == 0.0 {
        let height = canon.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let r0 = (0.5 * height).max(1e-3 * l);
        let starts: Vec<Vec<f64>> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .flat_map(|f| rates(f * r0).into_iter().map(move |w| vec![f * r0, w]))
            .collect();
        let f = residuals(&ts, &canon, |p: &[f64], t| cycloid(p[0], p[1] * t));
        consider(CycloidClass::Cycloid, least_squares_multistart(&starts, m, &f));
    } else {
        let r_fixed = canon[0].norm();
        let f = residuals(&ts, &canon, |p: &[f64], t| roulette(p[0], p[1], p[2] * t));
        let starts: Vec<Vec<f64>> = [-3.0, -1.5, -0.7, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9]
            .iter()
            .flat_map(|f| {
                rates(r_fixed)
                    .into_iter()
                    .map(move |w| vec![r_fixed, f * r_fixed, w])
            })
            .collect();
        let fit = least_squares_multistart(&starts, m, &f);
        let class = fit.as_ref().map(|f| {
            let (rf, r) = (f.params[0], f.params[1]);
            if (rf - r) * r > 0.0 {
                CycloidClass::Hypocycloid
            } else {
                CycloidClass::Epicycloid
            }
        });
        if let Some(c) = class {
            consider(c, fit);
        }
        let f = residuals(&ts, &canon, |p: &[f64], t| involute(p[0], p[1] * t));
        let starts: Vec<Vec<f64>> = rates(r_fixed)
            .into_iter()
            .map(|w| vec![r_fixed, w])
            .collect();
        consider(CycloidClass::Involute, least_squares_multistart(&starts, m, &f));
    }

    let (class, fit) = best.ok_or_else(|| Error::Numerical("no canonical fit converged".into()))?;
    let (fixed_radius, rolling_radius, rate) = match class {
        CycloidClass::Hypocycloid | CycloidClass::Epicycloid => {
            (fit.params[0], Some(fit.params[1]), fit.params[2])
        }
        CycloidClass::Involute | CycloidClass::Cycloid => (fit.params[0], None, fit.params[1]),
    };
    Ok(CanonicalFit {
        class,
        fixed_radius,
        rolling_radius,
        rate,
        max_residual: fit.max_residual,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;

    #[test]
    fn boundary_loop_closes() {
        let m = SpiralModel::new(0.2, 1.0, 3.0).unwrap();
        let s = endpoint_set(&m, 8, Exec::Sequential).unwrap();
        let g1 = &s.bounds[0].points;
        let g2 = &s.bounds[1].points;
        assert!((g1[g1.len() - 1] - g2[0]).norm() < 1e-14);
        assert!((g2[g2.len() - 1] - g1[0]).norm() < 1e-14);
        assert_eq!(s.points.len(), 9 * 9 * 9);
    }

    #[test]
    fn increasing_cloud_is_enclosed() {
        let m = SpiralModel::new(0.2, 1.0, 3.0).unwrap();
        let s = endpoint_set(&m, 24, Exec::Sequential).unwrap();
        let r = s.enclosure(1e-9, Exec::Sequential);
        assert_eq!(r.outside, 0, "{r:?}");
    }

    #[test]
    fn fixed_turning_points_have_that_turning() {
        let m = SpiralModel::new(0.2, 1.0, 3.0).unwrap();
        let s = fixed_turning_subset(&m, 1.5, 32, Exec::Sequential).unwrap();
        assert!(!s.points.is_empty());
        for p in &s.points {
            assert!((p.turning() - 1.5).abs() < 1e-12);
        }
        let b = &s.bounds;
        assert!((b[0].points[0] - b[1].points[b[1].points.len() - 1]).norm() < 1e-12);
    }

    #[test]
    fn cochleoid_fits_in_any_frame() {
        let m = SpiralModel::new(-0.7, 2.5, 3.0)
            .unwrap()
            .with_start(Pose::new(pt(1.0, -2.0), 0.8));
        assert!(cochleoid_residual(&m, 200) < 1e-12);
    }

    #[test]
    fn gamma2_classes() {
        let cases = [
            ((0.3, 1.0), CycloidClass::Hypocycloid),
            ((1.0, 0.3), CycloidClass::Epicycloid),
            ((1.0, 0.0), CycloidClass::Involute),
            ((0.0, 1.0), CycloidClass::Cycloid),
            ((-0.3, -1.0), CycloidClass::Hypocycloid),
        ];
        for ((k1, k2), class) in cases {
            let m = SpiralModel::new(k1, k2, 3.0).unwrap();
            let fit = gamma2_canonical_check(&m, 64).unwrap();
            assert_eq!(fit.class, class, "{k1} {k2} {fit:?}");
            assert!(fit.max_residual < 1e-8, "{k1} {k2} {fit:?}");
        }
    }

    #[test]
    fn hypocycloid_radii_match_curvatures() {
        let m = SpiralModel::new(0.4, 1.0, 3.0).unwrap();
        let fit = gamma2_canonical_check(&m, 64).unwrap();
        assert!((fit.fixed_radius - 2.5).abs() < 1e-7);
        let r = fit.rolling_radius.unwrap();
        let (a, b) = (1.0 / 0.4 - 1.0, 1.0);
        assert!((r - a).abs() < 1e-7 || (r - b).abs() < 1e-7, "{r}");
    }
}
