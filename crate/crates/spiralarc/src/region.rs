//! Planar region utilities: polygons, arc-bounded loops and raster overlap.

use crate::curve::{Segment, sinc};
use crate::geom::{cross, unit, Point, Pose};

/// Even-odd point-in-polygon test; the polygon is implicitly closed.
pub fn point_in_polygon(x: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > x.im) != (b.im > x.im) {
            let xi = a.re + (x.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if x.re < xi {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_segment(x: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let t = (((x - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (x - (a + ab * t)).norm()
}

pub fn distance_to_polyline(x: Point, poly: &[Point], closed: bool) -> f64 {
    let mut best = f64::INFINITY;
    for w in poly.windows(2) {
        best = best.min(distance_to_segment(x, w[0], w[1]));
    }
    if closed && poly.len() > 2 {
        best = best.min(distance_to_segment(x, poly[poly.len() - 1], poly[0]));
    }
    if poly.len() == 1 {
        best = (x - poly[0]).norm();
    }
    best
}

/// Signed shoelace area (positive counter-clockwise).
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| cross(poly[i], poly[(i + 1) % n]))
        .sum::<f64>()
        * 0.5
}

/// Convex hull by the monotone chain, counter-clockwise without repeated end point.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let it: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &q in it {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 1] - hull[hull.len() - 2], q - hull[hull.len() - 2]) <= 0.0
            {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0
}

/// Closed polygon with edges bucketed into horizontal bands for fast even-odd queries.
#[derive(Clone, Debug)]
pub struct PolygonIndex {
    poly: Vec<Point>,
    y0: f64,
    band: f64,
    bands: Vec<Vec<usize>>,
}

impl PolygonIndex {
    pub fn new(poly: Vec<Point>) -> Self {
        let n = poly.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &poly {
            lo = lo.min(p.im);
            hi = hi.max(p.im);
        }
        let nb = ((n as f64).sqrt().ceil() as usize).clamp(1, 4096);
        let band = ((hi - lo) / nb as f64).max(f64::MIN_POSITIVE);
        let mut bands = vec![Vec::new(); nb];
        if n >= 3 {
            for i in 0..n {
                let (a, b) = (poly[i], poly[(i + 1) % n]);
                let i0 = (((a.im.min(b.im) - lo) / band) as usize).min(nb - 1);
                let i1 = (((a.im.max(b.im) - lo) / band) as usize).min(nb - 1);
                for bucket in &mut bands[i0..=i1] {
                    bucket.push(i);
                }
            }
        }
        PolygonIndex {
            poly,
            y0: lo,
            band,
            bands,
        }
    }

    pub fn polygon(&self) -> &[Point] {
        &self.poly
    }

    pub fn contains(&self, x: Point) -> bool {
        let n = self.poly.len();
        if n < 3 || !(x.im >= self.y0) {
            return false;
        }
        let b = ((x.im - self.y0) / self.band) as usize;
        let Some(edges) = self.bands.get(b) else {
            return false;
        };
        let mut inside = false;
        for &i in edges {
            let (a, c) = (self.poly[i], self.poly[(i + 1) % n]);
            if (a.im > x.im) != (c.im > x.im) {
                let xi = a.re + (x.im - a.im) / (c.im - a.im) * (c.re - a.re);
                if x.re < xi {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Whether a closed polygon has two non-adjacent edges that properly cross.
pub fn has_self_intersection(poly: &[Point]) -> bool {
    !self_crossings(poly).is_empty()
}

/// Points where non-adjacent edges of a closed polygon properly cross.
pub fn self_crossings(poly: &[Point]) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    let edge = |i: usize| (poly[i], poly[(i + 1) % n]);
    let bbox = |(a, b): (Point, Point)| {
        (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im))
    };
    let boxes: Vec<_> = (0..n).map(|i| bbox(edge(i))).collect();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1 < bj.0 || bj.1 < bi.0 || bi.3 < bj.2 || bj.3 < bi.2 {
                continue;
            }
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            if segments_cross(a, b, c, d) {
                let t = cross(c - a, d - c) / cross(b - a, d - c);
                out.push(a + (b - a) * t);
            }
        }
    }
    out
}

/// Closed region bounded by circular arcs.
///
/// Each arc is split into pieces of bounded turning. A point is inside when the chord
/// polygon and the circular segments between each piece and its chord together cover it
/// an odd number of times, or when it lies within `tol` of the boundary.
#[derive(Clone, Debug)]
pub struct ArcLoop {
    pieces: Vec<(Pose, Segment)>,
    polygon: Vec<Point>,
}

impl ArcLoop {
    /// `paths` are start poses with their arcs, traversed in order to form a closed loop.
    pub fn new(paths: &[(Pose, &[Segment])], max_angle: f64) -> Self {
        let mut pieces = Vec::new();
        let mut polygon = Vec::new();
        for (start, segs) in paths {
            let mut p = *start;
            for s in segs.iter() {
                if s.l <= 0.0 {
                    continue;
                }
                let n = ((s.turning().abs() / max_angle).ceil() as usize).max(1);
                let piece = Segment::new(s.k, s.l / n as f64);
                for _ in 0..n {
                    polygon.push(p.point);
                    pieces.push((p, piece));
                    p = piece.end_from(p);
                }
            }
        }
        ArcLoop { pieces, polygon }
    }

    pub fn polygon(&self) -> &[Point] {
        &self.polygon
    }

    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        self.pieces
            .iter()
            .map(|(p, s)| s.distance_from(*p, x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: Point, tol: f64) -> bool {
        let mut inside = point_in_polygon(x, &self.polygon);
        for (p, s) in &self.pieces {
            if in_circular_segment(*p, *s, x) {
                inside = !inside;
            }
        }
        inside || self.distance_to_boundary(x) <= tol
    }
}

/// Strictly inside the region between an arc (turning below π) and its chord.
fn in_circular_segment(start: Pose, seg: Segment, x: Point) -> bool {
    if seg.k == 0.0 {
        return false;
    }
    let u = (x - start.point) * unit(-start.tau);
    let h = 0.5 * seg.turning();
    let chord = unit(h) * (seg.l * sinc(h));
    let k = seg.k;
    // Same side of the chord as the arc: right of it for a left turn.
    if cross(chord, u) * k.signum() >= 0.0 {
        return false;
    }
    // Inside the circle.
    let (px, py) = (u.re, u.im);
    k.abs() * (px * px + py * py) - 2.0 * py * k.signum() < 0.0
}

/// Boolean raster over an axis-aligned box.
#[derive(Clone, Debug)]
pub struct Raster {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    cells: Vec<bool>,
}

impl Raster {
    pub fn new(origin: Point, h: f64, nx: usize, ny: usize) -> Self {
        Raster {
            origin,
            h,
            nx,
            ny,
            cells: vec![false; nx * ny],
        }
    }

    /// Raster covering `[lo, hi]` with `margin` cells of padding.
    pub fn covering(lo: Point, hi: Point, h: f64, margin: usize) -> Self {
        let m = margin as f64 * h;
        let origin = lo - Point::new(m, m);
        let nx = ((hi.re - lo.re + 2.0 * m) / h).ceil() as usize + 1;
        let ny = ((hi.im - lo.im + 2.0 * m) / h).ceil() as usize + 1;
        Raster::new(origin, h, nx, ny)
    }

    fn index(&self, x: Point) -> Option<usize> {
        let fx = ((x.re - self.origin.re) / self.h).floor();
        let fy = ((x.im - self.origin.im) / self.h).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            return None;
        }
        Some(fy as usize * self.nx + fx as usize)
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.cells[iy * self.nx + ix]
    }

    pub fn contains_point(&self, x: Point) -> bool {
        self.index(x).is_some_and(|i| self.cells[i])
    }

    pub fn stamp(&mut self, x: Point) {
        if let Some(i) = self.index(x) {
            self.cells[i] = true;
        }
    }

    /// Stamps every cell crossed by the polyline, sampling at half-cell spacing.
    pub fn stamp_polyline(&mut self, pts: &[Point]) {
        for w in pts.windows(2) {
            let n = (((w[1] - w[0]).norm() / (0.5 * self.h)).ceil() as usize).max(1);
            for j in 0..=n {
                self.stamp(w[0] + (w[1] - w[0]) * (j as f64 / n as f64));
            }
        }
        if let [only] = pts {
            self.stamp(*only);
        }
    }

    fn dilate_axis(&self, r: usize, horizontal: bool) -> Vec<bool> {
        let mut out = vec![false; self.cells.len()];
        let (outer, inner) = if horizontal {
            (self.ny, self.nx)
        } else {
            (self.nx, self.ny)
        };
        for o in 0..outer {
            let at = |i: usize| {
                if horizontal {
                    o * self.nx + i
                } else {
                    i * self.nx + o
                }
            };
            // Distance to the nearest set cell, swept both ways.
            let mut last: Option<usize> = None;
            for i in 0..inner {
                if self.cells[at(i)] {
                    last = Some(i);
                }
                if last.is_some_and(|l| i - l <= r) {
                    out[at(i)] = true;
                }
            }
            last = None;
            for i in (0..inner).rev() {
                if self.cells[at(i)] {
                    last = Some(i);
                }
                if last.is_some_and(|l| l - i <= r) {
                    out[at(i)] = true;
                }
            }
        }
        out
    }

    fn dilate(&mut self, r: usize) {
        self.cells = self.dilate_axis(r, true);
        self.cells = self.dilate_axis(r, false);
    }

    fn erode(&mut self, r: usize) {
        self.cells.iter_mut().for_each(|c| *c = !*c);
        self.dilate(r);
        self.cells.iter_mut().for_each(|c| *c = !*c);
    }

    /// Morphological closing with a square of half-width `r` cells.
    pub fn close(&mut self, r: usize) {
        self.dilate(r);
        self.erode(r);
    }

    /// Fills cells not reachable from the raster border through empty cells.
    pub fn fill_holes(&mut self) {
        let (nx, ny) = (self.nx, self.ny);
        let mut outside = vec![false; self.cells.len()];
        let mut stack = Vec::new();
        for ix in 0..nx {
            stack.push(ix);
            stack.push((ny - 1) * nx + ix);
        }
        for iy in 0..ny {
            stack.push(iy * nx);
            stack.push(iy * nx + nx - 1);
        }
        while let Some(i) = stack.pop() {
            if outside[i] || self.cells[i] {
                continue;
            }
            outside[i] = true;
            let (x, y) = (i % nx, i / nx);
            if x > 0 {
                stack.push(i - 1);
            }
            if x + 1 < nx {
                stack.push(i + 1);
            }
            if y > 0 {
                stack.push(i - nx);
            }
            if y + 1 < ny {
                stack.push(i + nx);
            }
        }
        for (c, o) in self.cells.iter_mut().zip(outside) {
            *c = !o;
        }
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|c| **c).count()
    }

    /// Cells set in both rasters; the two must share the grid.
    pub fn overlap(&self, other: &Raster) -> Vec<(usize, usize)> {
        assert_eq!((self.nx, self.ny), (other.nx, other.ny));
        self.cells
            .iter()
            .zip(&other.cells)
            .enumerate()
            .filter(|(_, (a, b))| **a && **b)
            .map(|(i, _)| (i % self.nx, i / self.nx))
            .collect()
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        self.origin + Point::new((ix as f64 + 0.5) * self.h, (iy as f64 + 0.5) * self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_index_agrees_with_direct_test() {
        let poly: Vec<Point> = (0..97)
            .map(|i| {
                let t = i as f64 / 97.0 * std::f64::consts::TAU;
                unit(t) * (1.0 + 0.4 * (5.0 * t).sin())
            })
            .collect();
        let idx = PolygonIndex::new(poly.clone());
        for i in 0..60 {
            for j in 0..60 {
                let x = Point::new(-1.5 + i as f64 * 0.05, -1.5 + j as f64 * 0.05);
                assert_eq!(idx.contains(x), point_in_polygon(x, &poly));
            }
        }
    }
    use crate::geom::pt;
    use std::f64::consts::PI;

    #[test]
    fn square_tests() {
        let sq = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        assert!(point_in_polygon(pt(0.5, 0.5), &sq));
        assert!(!point_in_polygon(pt(1.5, 0.5), &sq));
        assert!((polygon_area(&sq) - 1.0).abs() < 1e-15);
        assert!((distance_to_polyline(pt(0.5, 2.0), &sq, true) - 1.0).abs() < 1e-15);
        assert!(!has_self_intersection(&sq));
        let bow = [pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)];
        assert!(has_self_intersection(&bow));
    }

    #[test]
    fn hull_of_square_with_interior() {
        let pts = [
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(0.5, 0.5),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
            pt(0.2, 0.7),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disc_as_arc_loop() {
        let seg = [Segment::new(1.0, 2.0 * PI)];
        let lp = ArcLoop::new(&[(Pose::new(pt(0.0, -1.0), 0.0), &seg)], 0.5);
        assert!(lp.contains(pt(0.0, 0.0), 0.0));
        assert!(lp.contains(pt(0.0, 0.999), 0.0));
        assert!(lp.contains(pt(0.7, 0.7), 0.0));
        assert!(!lp.contains(pt(0.0, 1.001), 0.0));
        assert!(!lp.contains(pt(0.72, 0.72), 0.0));
        assert!(lp.contains(pt(0.0, 1.001), 0.01));
    }

    #[test]
    fn closing_bridges_small_gaps() {
        let mut r = Raster::new(pt(0.0, 0.0), 1.0, 20, 20);
        for i in 0..20 {
            if i % 3 != 0 {
                r.stamp(pt(i as f64 + 0.5, 10.5));
            }
        }
        r.close(2);
        assert!((0..20).all(|i| r.get(i, 10)));
        assert!(!r.get(5, 5));
    }

    #[test]
    fn fill_ring() {
        let mut r = Raster::new(pt(0.0, 0.0), 1.0, 10, 10);
        let ring: Vec<Point> = (0..=64)
            .map(|i| pt(5.0, 5.0) + unit(i as f64 * PI / 32.0) * 3.0)
            .collect();
        r.stamp_polyline(&ring);
        assert!(!r.get(5, 5));
        r.fill_holes();
        assert!(r.get(5, 5));
        assert!(!r.get(0, 0));
    }
}
