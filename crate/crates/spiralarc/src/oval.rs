//! Closedness of ovals with four curvature extrema.
//!
//! The oval is split at two opposite vertices into one-vertex arcs. For a prescribed
//! turning of the first arc, the reachable endpoints of both arcs are enumerated from
//! two-level-per-part curvature profiles; the oval can close only where the two sets meet.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{z2, z3, PiecewiseConstCurve, Segment};
use crate::error::{invalid, Error, Result};
use crate::exec::{flat_map_indexed, map_slice, Exec};
use crate::geom::{Point, Pose};
use crate::roots::{bisect, sign_changes, RootOptions};
use crate::region::Raster;

pub const DEFAULT_GRID: usize = 10;
pub const DEFAULT_STEPS: usize = 48;
const CLOSING_RADIUS: usize = 3;
const BOUND_SAMPLES: usize = 4096;

/// Curvature extrema `k₁ < k₂ > k₃ < k₄ > k₁` at the ends of arcs of lengths `L₁..L₄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvalSpec {
    pub k: [f64; 4],
    pub l: [f64; 4],
}

/// Which pair of opposite vertices splits the oval: the curvature minima (`μ`) or the
/// maxima (`ν`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Mu,
    Nu,
}

impl OvalSpec {
    pub fn new(k: [f64; 4], l: [f64; 4]) -> Result<Self> {
        if k.iter().chain(&l).any(|v| !v.is_finite()) {
            return Err(invalid("oval data must be finite"));
        }
        if l.iter().any(|v| *v <= 0.0) {
            return Err(invalid("arc lengths must be positive"));
        }
        if k.iter().any(|v| *v < 0.0) {
            return Err(invalid("oval curvatures must be non-negative"));
        }
        let [k1, k2, k3, k4] = k;
        if !(k1 < k2 && k2 > k3 && k3 < k4 && k4 > k1) {
            return Err(invalid(
                "curvatures must alternate k1 < k2 > k3 < k4 > k1",
            ));
        }
        Ok(OvalSpec { k, l })
    }

    /// Equal unit arcs with `k₁ = k₃ = κ₁` and `k₂ = k₄ = κ₂`.
    pub fn symmetric(kappa1: f64, kappa2: f64) -> Result<Self> {
        OvalSpec::new([kappa1, kappa2, kappa1, kappa2], [1.0; 4])
    }

    pub fn perimeter(&self) -> f64 {
        self.l.iter().sum()
    }

    /// The two one-vertex arcs; the second is listed from the far split vertex backwards.
    pub fn arcs(&self, split: Split) -> (OneVertexArc, OneVertexArc) {
        let [k1, k2, k3, k4] = self.k;
        let [l1, l2, l3, l4] = self.l;
        match split {
            Split::Mu => (
                OneVertexArc::new(k1, k2, k3, l1, l2),
                OneVertexArc::new(k1, k4, k3, l4, l3),
            ),
            Split::Nu => (
                OneVertexArc::new(k2, k3, k4, l2, l3),
                OneVertexArc::new(k2, k1, k4, l1, l4),
            ),
        }
    }

    /// Open interval of turnings for the first arc compatible with both arcs' levels.
    pub fn natural_range(&self, split: Split) -> Option<(f64, f64)> {
        let (a, b) = self.arcs(split);
        let (lo1, hi1) = a.turning_range();
        let (lo2, hi2) = b.turning_range();
        let lo = lo1.max(TAU - hi2);
        let hi = hi1.min(TAU - lo2);
        (lo < hi).then_some((lo, hi))
    }

    pub fn natural_mu_range(&self) -> Option<(f64, f64)> {
        self.natural_range(Split::Mu)
    }

    pub fn natural_nu_range(&self) -> Option<(f64, f64)> {
        self.natural_range(Split::Nu)
    }

    /// Both one-vertex models at first-arc turning `angle`.
    pub fn halves(&self, split: Split, angle: f64) -> (OneVertexModel, OneVertexModel) {
        let (a, b) = self.arcs(split);
        (
            OneVertexModel {
                arc: a,
                turning: angle,
                orientation: Orientation::First,
            },
            OneVertexModel {
                arc: b,
                turning: TAU - angle,
                orientation: Orientation::Second,
            },
        )
    }
}

/// Curvature running monotonically from `ka` to `kb` over `la`, then from `kb` to `kc`
/// over `lb`; `kb` is the single vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneVertexArc {
    pub ka: f64,
    pub kb: f64,
    pub kc: f64,
    pub la: f64,
    pub lb: f64,
}

impl OneVertexArc {
    pub fn new(ka: f64, kb: f64, kc: f64, la: f64, lb: f64) -> Self {
        OneVertexArc { ka, kb, kc, la, lb }
    }

    pub fn length(&self) -> f64 {
        self.la + self.lb
    }

    /// Extreme turnings of curvature profiles respecting the vertex.
    pub fn turning_range(&self) -> (f64, f64) {
        let sides = self.ka * self.la + self.kc * self.lb;
        let peak = self.kb * self.length();
        (sides.min(peak), sides.max(peak))
    }

    fn levels_ok(&self, p: &ArcParams) -> bool {
        const E: f64 = 1e-12;
        let between = |x: f64, a: f64, b: f64| x >= a.min(b) - E && x <= a.max(b) + E;
        between(p.q1, self.ka, self.kb)
            && between(p.q2, p.q1, self.kb)
            && between(p.q3, self.kc, self.kb)
            && between(p.q4, self.kc, p.q3)
            && (-E..=self.la + E).contains(&p.l1)
            && (-E..self.lb).contains(&p.l3)
    }

    /// Completes free parameters `(q₁, q₂, l₁, q₃, l₃)` with the level `q₄` that gives
    /// total turning `turning`.
    pub fn complete(&self, free: [f64; 5], turning: f64) -> ArcParams {
        let [q1, q2, l1, q3, l3] = free;
        let rem = turning - q1 * l1 - q2 * (self.la - l1) - q3 * l3;
        ArcParams {
            q1,
            l1,
            q2,
            q3,
            l3,
            q4: rem / (self.lb - l3),
        }
    }

    pub fn segments(&self, p: &ArcParams) -> [Segment; 4] {
        [
            Segment::new(p.q1, p.l1),
            Segment::new(p.q2, self.la - p.l1),
            Segment::new(p.q3, p.l3),
            Segment::new(p.q4, self.lb - p.l3),
        ]
    }

    /// Endpoint when traced from the origin along +x.
    pub fn endpoint(&self, p: &ArcParams) -> Point {
        crate::curve::zn(&self.segments(p))
    }
}

/// Levels and split lengths of a one-vertex profile: `(q₁, l₁)`, `(q₂, la − l₁)` on the
/// first part, `(q₃, l₃)`, `(q₄, lb − l₃)` on the second.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcParams {
    pub q1: f64,
    pub l1: f64,
    pub q2: f64,
    pub q3: f64,
    pub l3: f64,
    pub q4: f64,
}

impl ArcParams {
    fn free(&self) -> [f64; 5] {
        [self.q1, self.q2, self.l1, self.q3, self.l3]
    }
}

/// How a set is placed: the first arc leaves the origin downwards; the second is the
/// reversed complementary arc, leaving upwards with mirrored curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    First,
    Second,
}

impl Orientation {
    pub fn place(&self, z: Point) -> Point {
        match self {
            Orientation::First => z * Point::new(0.0, -1.0),
            Orientation::Second => z.conj() * Point::new(0.0, 1.0),
        }
    }
}

/// One-vertex arc with fixed turning and placement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneVertexModel {
    pub arc: OneVertexArc,
    pub turning: f64,
    pub orientation: Orientation,
}

impl OneVertexModel {
    pub fn place(&self, p: &ArcParams) -> Point {
        self.orientation.place(self.arc.endpoint(p))
    }

    /// Upper edge `A B`: two arcs spanning the parts, `q₁(u)` and `q₂(u)` moving in
    /// opposite directions.
    pub fn ab_bound(&self, n: usize) -> Vec<(f64, Point)> {
        let a = &self.arc;
        let (t, l) = (self.turning, a.length());
        let (k1lo, k1hi) = (a.ka.min(a.kb), a.ka.max(a.kb));
        let (k2lo, k2hi) = (a.kc.min(a.kb), a.kc.max(a.kb));
        let lo = ((t - k1hi * l) / (2.0 * a.lb)).max((k2lo * l - t) / (2.0 * a.la));
        let hi = ((t - k1lo * l) / (2.0 * a.lb)).min((k2hi * l - t) / (2.0 * a.la));
        if lo > hi {
            return Vec::new();
        }
        (0..=n)
            .map(|i| {
                let u = lo + (hi - lo) * i as f64 / n as f64;
                let (q1, q2) = self.ab_levels(u);
                (u, self.orientation.place(z2(q1, a.la, q2, a.lb)))
            })
            .collect()
    }

    pub fn ab_levels(&self, u: f64) -> (f64, f64) {
        let a = &self.arc;
        let l = a.length();
        (
            (self.turning - 2.0 * u * a.lb) / l,
            (self.turning + 2.0 * u * a.la) / l,
        )
    }

    /// Lengths `(l₁, l₂, l₃)` of the three-arc profile at the extreme levels with
    /// `l₃ − l₁ = 2v`.
    pub fn cd_lengths(&self, v: f64) -> [f64; 3] {
        let a = &self.arc;
        let l = a.length();
        let den = a.ka - 2.0 * a.kb + a.kc;
        let l1 = (self.turning - a.kb * l + 2.0 * v * (a.kb - a.kc)) / den;
        let l3 = l1 + 2.0 * v;
        [l1, l - l1 - l3, l3]
    }

    /// Feasible `v` interval of the lower edge, if any.
    pub fn cd_range(&self) -> Option<(f64, f64)> {
        let a = &self.arc;
        let base = self.cd_lengths(0.0);
        let s1 = self.cd_lengths(1.0)[0] - base[0];
        let s3 = self.cd_lengths(1.0)[2] - base[2];
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (c0, c1, cap) in [(base[0], s1, a.la), (base[2], s3, a.lb)] {
            if c1 == 0.0 {
                if !(0.0..=cap).contains(&c0) {
                    return None;
                }
                continue;
            }
            let (x, y) = ((0.0 - c0) / c1, (cap - c0) / c1);
            lo = lo.max(x.min(y));
            hi = hi.min(x.max(y));
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Lower edge `C D`: three arcs at the extreme levels.
    pub fn cd_bound(&self, n: usize) -> Vec<(f64, Point)> {
        let Some((lo, hi)) = self.cd_range() else {
            return Vec::new();
        };
        let a = &self.arc;
        (0..=n)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / n as f64;
                let [l1, l2, l3] = self.cd_lengths(v).map(|x| x.max(0.0));
                (v, self.orientation.place(z3(a.ka, l1, a.kb, l2, a.kc, l3)))
            })
            .collect()
    }
}

/// Placed endpoint cloud of a one-vertex model with its two closed-form edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneVertexSet {
    pub model: OneVertexModel,
    pub points: Vec<Point>,
    pub params: Vec<ArcParams>,
    pub ab: Vec<Point>,
    pub cd: Vec<Point>,
}

impl OneVertexSet {
    fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for p in self.points.iter().chain(&self.ab).chain(&self.cd) {
            lo = Point::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Point::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        (lo, hi)
    }

    fn rasterize(&self, grid: &Raster) -> Raster {
        let mut r = Raster::new(grid.origin, grid.h, grid.nx, grid.ny);
        for p in &self.points {
            r.stamp(*p);
        }
        r.stamp_polyline(&self.ab);
        r.stamp_polyline(&self.cd);
        r.close(CLOSING_RADIUS);
        r.fill_holes();
        r
    }
}

/// Endpoints over a `grid`-step lattice in `(q₁, q₂, l₁, q₃, l₃)`; `q₄` follows from the
/// turning and is kept when it respects the vertex.
pub fn one_vertex_endpoint_set(
    model: &OneVertexModel,
    grid: usize,
    exec: Exec,
) -> Result<OneVertexSet> {
    if grid == 0 {
        return Err(invalid("grid must have at least one step"));
    }
    let a = model.arc;
    let g = grid as f64;
    let found = flat_map_indexed(exec, grid + 1, |i| {
        let q1 = a.ka + (a.kb - a.ka) * i as f64 / g;
        let mut out = Vec::new();
        for j in 0..=grid {
            let q2 = q1 + (a.kb - q1) * j as f64 / g;
            for m in 0..=grid {
                let l1 = a.la * m as f64 / g;
                for s in 0..=grid {
                    let q3 = a.kc + (a.kb - a.kc) * s as f64 / g;
                    for b in 0..grid {
                        let l3 = a.lb * b as f64 / g;
                        let p = a.complete([q1, q2, l1, q3, l3], model.turning);
                        if a.levels_ok(&p) {
                            out.push((model.place(&p), p));
                        }
                    }
                }
            }
        }
        out
    });
    if found.is_empty() {
        return Err(Error::Infeasible(format!(
            "no grid profile reaches turning {} with levels ({}, {}, {})",
            model.turning, a.ka, a.kb, a.kc
        )));
    }
    let (points, params) = found.into_iter().unzip();
    Ok(OneVertexSet {
        model: *model,
        points,
        params,
        ab: model.ab_bound(BOUND_SAMPLES).into_iter().map(|x| x.1).collect(),
        cd: model.cd_bound(BOUND_SAMPLES).into_iter().map(|x| x.1).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub grid: usize,
    /// Sample count across the natural range.
    pub steps: usize,
    /// Width of the bracket at which contact bisection stops.
    pub contact_tol: f64,
    pub exec: Exec,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            grid: DEFAULT_GRID,
            steps: DEFAULT_STEPS,
            contact_tol: 1e-3 * PI,
            exec: Exec::default(),
        }
    }
}

/// Both sets at one turning value and their rasterized overlap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepFrame {
    pub split: Split,
    pub angle: f64,
    pub first: OneVertexSet,
    pub second: OneVertexSet,
    pub overlap_area: f64,
    pub intersects: bool,
    /// Centre of the overlap cell nearest the overlap centroid.
    pub common: Option<Point>,
    pub cell: f64,
}

/// Raster cell size for a spec.
pub fn cell_size(spec: &OvalSpec) -> f64 {
    3e-4 * spec.perimeter()
}

pub fn frame(spec: &OvalSpec, split: Split, angle: f64, grid: usize, exec: Exec) -> Result<SweepFrame> {
    let (m1, m2) = spec.halves(split, angle);
    let first = one_vertex_endpoint_set(&m1, grid, exec)?;
    let second = one_vertex_endpoint_set(&m2, grid, exec)?;
    let h = cell_size(spec);
    let (lo1, hi1) = first.bbox();
    let (lo2, hi2) = second.bbox();
    let apart = lo1.re > hi2.re || lo2.re > hi1.re || lo1.im > hi2.im || lo2.im > hi1.im;
    let mut out = SweepFrame {
        split,
        angle,
        first,
        second,
        overlap_area: 0.0,
        intersects: false,
        common: None,
        cell: h,
    };
    if apart {
        return Ok(out);
    }
    let lo = Point::new(lo1.re.min(lo2.re), lo1.im.min(lo2.im));
    let hi = Point::new(hi1.re.max(hi2.re), hi1.im.max(hi2.im));
    let grid_r = Raster::covering(lo, hi, h, 2 * CLOSING_RADIUS + 2);
    let rasters = map_slice(exec, &[&out.first, &out.second], |s| s.rasterize(&grid_r));
    let cells = rasters[0].overlap(&rasters[1]);
    let area = cells.len() as f64 * h * h;
    out.overlap_area = area;
    out.intersects = area > 1e-6 * spec.perimeter().powi(2);
    if !cells.is_empty() {
        let centers: Vec<Point> = cells.iter().map(|&(x, y)| grid_r.cell_center(x, y)).collect();
        let mean = centers.iter().sum::<Point>() / centers.len() as f64;
        out.common = centers
            .into_iter()
            .min_by(|a, b| (a - mean).norm().total_cmp(&(b - mean).norm()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub angle: f64,
    pub intersects: bool,
    pub overlap_area: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Intersects,
    Never,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosenessReport {
    pub split: Split,
    pub range: (f64, f64),
    pub samples: Vec<SweepSample>,
    /// Turnings where the sets start or stop overlapping.
    pub contacts: Vec<f64>,
    pub verdict: Verdict,
}

fn status(spec: &OvalSpec, split: Split, angle: f64, opts: &SweepOptions) -> SweepSample {
    match frame(spec, split, angle, opts.grid, opts.exec) {
        Ok(f) => SweepSample {
            angle,
            intersects: f.intersects,
            overlap_area: f.overlap_area,
        },
        Err(_) => SweepSample {
            angle,
            intersects: false,
            overlap_area: 0.0,
        },
    }
}

/// Sweeps the first-arc turning across the natural range and locates the contacts.
pub fn closeness_sweep(spec: &OvalSpec, split: Split, opts: &SweepOptions) -> Result<ClosenessReport> {
    if opts.steps < 2 {
        return Err(invalid("a sweep needs at least two steps"));
    }
    let range = spec.natural_range(split).ok_or_else(|| {
        Error::Infeasible(format!("natural {split:?} range is empty"))
    })?;
    let (lo, hi) = range;
    let angles: Vec<f64> = (1..opts.steps)
        .map(|i| lo + (hi - lo) * i as f64 / opts.steps as f64)
        .collect();
    let inner = SweepOptions {
        exec: Exec::Sequential,
        ..*opts
    };
    let samples = map_slice(opts.exec, &angles, |&a| status(spec, split, a, &inner));
    let mut contacts = Vec::new();
    for w in samples.windows(2) {
        if w[0].intersects == w[1].intersects {
            continue;
        }
        let (mut a, mut b) = (w[0].angle, w[1].angle);
        let inside_at_a = w[0].intersects;
        while b - a > opts.contact_tol {
            let m = 0.5 * (a + b);
            if status(spec, split, m, opts).intersects == inside_at_a {
                a = m;
            } else {
                b = m;
            }
        }
        contacts.push(0.5 * (a + b));
    }
    let verdict = if samples.iter().any(|s| s.intersects) {
        Verdict::Intersects
    } else {
        Verdict::Never
    };
    Ok(ClosenessReport {
        split,
        range,
        samples,
        contacts,
        verdict,
    })
}

/// Closed eight-arc curve assembled from the two halves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedOval {
    pub curve: PiecewiseConstCurve,
    pub first: ArcParams,
    pub second: ArcParams,
    /// Distance between the end and the start.
    pub gap: f64,
    pub turning: f64,
}

impl ClosedOval {
    pub fn is_convex(&self) -> bool {
        self.curve.segments.iter().all(|s| s.k >= 0.0 || s.l == 0.0)
    }
}

fn assemble(spec: &OvalSpec, split: Split, angle: f64, p1: &ArcParams, p2: &ArcParams) -> Result<ClosedOval> {
    let (m1, m2) = spec.halves(split, angle);
    let mut segs: Vec<Segment> = m1.arc.segments(p1).to_vec();
    segs.extend(m2.arc.segments(p2).iter().rev().copied());
    let curve = PiecewiseConstCurve::new(Pose::origin(-FRAC_PI_2), segs)?;
    let end = curve.end();
    Ok(ClosedOval {
        gap: (end.point - curve.start.point).norm(),
        turning: curve.turning(),
        curve,
        first: *p1,
        second: *p2,
    })
}

/// Closes the oval at `angle`: starting from the cloud profiles nearest a common point
/// of the two sets, Gauss–Newton steps on both profiles drive the endpoint gap below
/// `tol`.
pub fn certify_closure(
    spec: &OvalSpec,
    split: Split,
    angle: f64,
    grid: usize,
    tol: f64,
    exec: Exec,
) -> Result<ClosedOval> {
    let f = frame(spec, split, angle, grid, exec)?;
    let target = f
        .common
        .filter(|_| f.intersects)
        .ok_or_else(|| Error::Infeasible(format!("the sets do not meet at {angle}")))?;
    let nearest = |s: &OneVertexSet| {
        let mut idx: Vec<usize> = (0..s.points.len()).collect();
        idx.sort_by(|&a, &b| {
            (s.points[a] - target)
                .norm()
                .total_cmp(&(s.points[b] - target).norm())
        });
        idx.truncate(6);
        idx
    };
    let (m1, m2) = (f.first.model, f.second.model);
    let mut last = None;
    for &i in &nearest(&f.first) {
        for &j in &nearest(&f.second) {
            match close_pair(&m1, &m2, f.first.params[i], f.second.params[j], tol) {
                Ok((p1, p2)) => return assemble(spec, split, angle, &p1, &p2),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(last.unwrap_or_else(|| Error::Numerical("no starting profiles".into())))
}

fn close_pair(
    m1: &OneVertexModel,
    m2: &OneVertexModel,
    p1: ArcParams,
    p2: ArcParams,
    tol: f64,
) -> Result<(ArcParams, ArcParams)> {
    let unpack = |x: &[f64; 10]| {
        let f1 = [x[0], x[1], x[2], x[3], x[4]];
        let f2 = [x[5], x[6], x[7], x[8], x[9]];
        (m1.arc.complete(f1, m1.turning), m2.arc.complete(f2, m2.turning))
    };
    let resid = |x: &[f64; 10]| {
        let (a, b) = unpack(x);
        m1.place(&a) - m2.place(&b)
    };
    let feasible = |x: &[f64; 10]| {
        let (a, b) = unpack(x);
        m1.arc.levels_ok(&a) && m2.arc.levels_ok(&b)
    };
    let mut x = [0.0; 10];
    x[..5].copy_from_slice(&p1.free());
    x[5..].copy_from_slice(&p2.free());
    let mut r = resid(&x);
    for _ in 0..100 {
        if r.norm() <= tol {
            let (a, b) = unpack(&x);
            return Ok((a, b));
        }
        let mut jac = [[0.0; 10]; 2];
        for c in 0..10 {
            let h = 1e-7 * (1.0 + x[c].abs());
            let mut xp = x;
            xp[c] += h;
            let mut xm = x;
            xm[c] -= h;
            let d = (resid(&xp) - resid(&xm)) / (2.0 * h);
            jac[0][c] = d.re;
            jac[1][c] = d.im;
        }
        // Minimum-norm Gauss–Newton step: Δ = −Jᵀ(JJᵀ)⁻¹r.
        let dot = |a: &[f64; 10], b: &[f64; 10]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let (a, b, d) = (dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1]), dot(&jac[1], &jac[1]));
        let det = a * d - b * b;
        if det.abs() < 1e-300 {
            return Err(Error::Numerical("singular closure Jacobian".into()));
        }
        let y0 = (d * r.re - b * r.im) / det;
        let y1 = (-b * r.re + a * r.im) / det;
        let step: [f64; 10] = std::array::from_fn(|c| -(jac[0][c] * y0 + jac[1][c] * y1));
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-6 {
            let xn: [f64; 10] = std::array::from_fn(|c| x[c] + alpha * step[c]);
            if feasible(&xn) {
                let rn = resid(&xn);
                if rn.norm() < r.norm() {
                    x = xn;
                    r = rn;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Err(Error::Numerical(format!(
        "closure stalled with gap {}",
        r.norm()
    )))
}

/// Contact function of the symmetric case, `k₁ = k₃`, `k₂ = k₄`, equal arcs: vanishes
/// when the single arc of turning `x` ends where the symmetric three-arc profile of
/// turning `2π − x` does.
pub fn phi(x: f64, p: f64, q: f64) -> f64 {
    q * (x - 2.0 * p) * (0.5 * x).sin()
        + x * (q - p) * (q * (2.0 * p + x - TAU) / (2.0 * (q - p))).sin()
}

/// `phi` divided by `min(p, q)`, continued to `min(p, q) = 0` where `phi` vanishes
/// identically. Same roots otherwise.
pub fn phi_normalized(x: f64, p: f64, q: f64) -> f64 {
    let m = p.min(q);
    if m.abs() > 1e-8 {
        return phi(x, p, q) / m;
    }
    let (s, c) = (0.5 * x).sin_cos();
    if p <= q {
        (x - 2.0 * q) * s - 0.5 * x * (2.0 * q + x - TAU) * c
    } else {
        (x - 2.0 * p) * s + 0.5 * x * (2.0 * p + x - TAU)
    }
}

/// Natural range of `μ` (and `ν`) for the symmetric case with `κᵢ = kᵢL`.
pub fn symmetric_range(kappa1: f64, kappa2: f64) -> (f64, f64) {
    if kappa1 + kappa2 <= PI {
        (TAU - 2.0 * kappa2, 2.0 * kappa2)
    } else {
        (2.0 * kappa1, TAU - 2.0 * kappa1)
    }
}

/// Predicted closeness limits `μ′ < μ″` and `ν′ < ν″` for the symmetric case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricLimits {
    pub mu1: f64,
    pub mu2: f64,
    pub nu1: f64,
    pub nu2: f64,
}

/// The single root of `phi_normalized(·; p, q)` inside `range`.
pub fn unique_root(p: f64, q: f64, range: (f64, f64), scan: usize) -> Result<f64> {
    let (lo, hi) = range;
    let pad = 1e-9 * (hi - lo);
    let f = |x: f64| phi_normalized(x, p, q);
    let brackets = sign_changes(f, lo + pad, hi - pad, scan);
    match brackets.as_slice() {
        [] => {
            let vals: Vec<String> = (0..=8)
                .map(|i| {
                    let x = lo + (hi - lo) * i as f64 / 8.0;
                    format!("{x:.4}:{:.3e}", f(x))
                })
                .collect();
            Err(Error::NoRoot(format!(
                "no sign change of the contact function on ({lo}, {hi}); samples {}",
                vals.join(" ")
            )))
        }
        [(a, b)] => {
            let r = bisect(
                f,
                *a,
                *b,
                RootOptions {
                    f_tol: 0.0,
                    x_tol: 1e-14,
                    max_iter: 200,
                },
            )?;
            Ok(r.x)
        }
        many => Err(Error::Numerical(format!(
            "{} sign changes of the contact function on ({lo}, {hi})",
            many.len()
        ))),
    }
}

pub fn solve_symmetric_limits(kappa1: f64, kappa2: f64) -> Result<SymmetricLimits> {
    if !((0.0..FRAC_PI_2).contains(&kappa1) && kappa2 > FRAC_PI_2) || !kappa2.is_finite() {
        return Err(invalid(format!(
            "closeness needs 0 <= kappa1 < pi/2 < kappa2, got ({kappa1}, {kappa2})"
        )));
    }
    let range = symmetric_range(kappa1, kappa2);
    let mu2 = unique_root(kappa1, kappa2, range, 4000)?;
    let nu1 = unique_root(kappa2, kappa1, range, 4000)?;
    Ok(SymmetricLimits {
        mu1: TAU - mu2,
        mu2,
        nu1,
        nu2: TAU - nu1,
    })
}
