//! Minimal SVG figures in y-up coordinates.

use std::fmt::Write;

use spiralarc::geom::Point;

const MAX_DOTS: usize = 20_000;

enum Item {
    Line {
        points: Vec<Point>,
        color: String,
        closed: bool,
        dashed: bool,
    },
    Dots {
        points: Vec<Point>,
        color: String,
    },
}

#[derive(Default)]
pub struct Figure {
    title: String,
    items: Vec<Item>,
}

impl Figure {
    pub fn new(title: impl Into<String>) -> Self {
        Figure {
            title: title.into(),
            items: Vec::new(),
        }
    }

    pub fn line(&mut self, points: Vec<Point>, color: &str) -> &mut Self {
        self.push_line(points, color, false, false)
    }

    pub fn dashed(&mut self, points: Vec<Point>, color: &str) -> &mut Self {
        self.push_line(points, color, false, true)
    }

    pub fn polygon(&mut self, points: Vec<Point>, color: &str) -> &mut Self {
        self.push_line(points, color, true, false)
    }

    fn push_line(&mut self, points: Vec<Point>, color: &str, closed: bool, dashed: bool) -> &mut Self {
        if points.len() >= 2 {
            self.items.push(Item::Line {
                points,
                color: color.into(),
                closed,
                dashed,
            });
        }
        self
    }

    /// Scatter; long clouds are thinned to a fixed budget by stride.
    pub fn dots(&mut self, points: &[Point], color: &str) -> &mut Self {
        let stride = points.len().div_ceil(MAX_DOTS).max(1);
        self.items.push(Item::Dots {
            points: points.iter().step_by(stride).copied().collect(),
            color: color.into(),
        });
        self
    }

    fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for it in &self.items {
            let pts = match it {
                Item::Line { points, .. } | Item::Dots { points, .. } => points,
            };
            for p in pts.iter().filter(|p| p.re.is_finite() && p.im.is_finite()) {
                lo = Point::new(lo.re.min(p.re), lo.im.min(p.im));
                hi = Point::new(hi.re.max(p.re), hi.im.max(p.im));
            }
        }
        if !lo.re.is_finite() {
            return (Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        }
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let pad = 0.05 * span;
        let (x0, y0) = (lo.re - pad, lo.im - pad);
        let (w, h) = (hi.re - lo.re + 2.0 * pad, hi.im - lo.im + 2.0 * pad);
        let px_w = 800.0;
        let px_h = (px_w * h / w).round();
        let r = 0.002 * span;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px_w}" height="{px_h}" viewBox="{x0} {} {w} {h}">"#,
            -(y0 + h)
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none">"#);
        for it in &self.items {
            match it {
                Item::Line {
                    points,
                    color,
                    closed,
                    dashed,
                } => {
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let dash = if *dashed { r#" stroke-dasharray="4 3""# } else { "" };
                    let _ = write!(
                        s,
                        r#"<{tag} stroke="{color}" stroke-width="1.2" vector-effect="non-scaling-stroke"{dash} points=""#
                    );
                    for (i, p) in points.iter().enumerate() {
                        if i > 0 {
                            s.push(' ');
                        }
                        let _ = write!(s, "{},{}", p.re, p.im);
                    }
                    s.push_str("\"/>\n");
                }
                Item::Dots { points, color } => {
                    let _ = writeln!(s, r#"<g fill="{color}" stroke="none">"#);
                    for p in points {
                        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{r}"/>"#, p.re, p.im);
                    }
                    s.push_str("</g>\n");
                }
            }
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flips_the_y_axis() {
        let mut f = Figure::new("t");
        f.line(vec![Point::new(0.0, 0.0), Point::new(1.0, 2.0)], "black");
        let s = f.render();
        assert!(s.contains(r#"transform="scale(1,-1)""#));
        assert!(s.contains(r#"viewBox="-0.1 -2.1 1.2 2.2""#), "{s}");
        assert!(s.contains("points=\"0,0 1,2\""));
    }

    #[test]
    fn thins_large_clouds() {
        let pts: Vec<Point> = (0..50_000).map(|i| Point::new(i as f64, 0.0)).collect();
        let mut f = Figure::new("cloud");
        f.dots(&pts, "red");
        assert!(f.render().matches("<circle").count() <= MAX_DOTS);
    }
}
