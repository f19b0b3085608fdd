//! Bracketed scalar root finding.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Stop once `|f(x)| ≤ f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            f_tol: 0.0,
            x_tol: 0.0,
            max_iter: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

fn check_bracket(flo: f64, fhi: f64, lo: f64, hi: f64) -> Result<()> {
    if !(flo.is_finite() && fhi.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite function value on bracket [{lo}, {hi}]"
        )));
    }
    if flo * fhi > 0.0 {
        return Err(Error::NoRoot(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    Ok(())
}

/// Plain bisection; the bracket must straddle a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    check_bracket(fa, fb, a, b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=opts.max_iter {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            return Ok(Root { x: best.0, fx: best.1, iterations: it });
        }
        let fm = f(m);
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm.abs() <= opts.f_tol || (b - a).abs() <= opts.x_tol || fm == 0.0 {
            return Ok(Root { x: m, fx: fm, iterations: it });
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Root { x: best.0, fx: best.1, iterations: opts.max_iter })
}

/// Regula falsi with the Illinois modification, falling back to bisection when a
/// step stalls. Keeps the bracket throughout.
pub fn illinois<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    check_bracket(fa, fb, a, b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    let mut side = 0i8;
    let mut width = (b - a).abs();
    for it in 1..=opts.max_iter {
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx.abs() <= opts.f_tol || fx == 0.0 {
            return Ok(Root { x, fx, iterations: it });
        }
        if (fx > 0.0) == (fb > 0.0) {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        let w = (b - a).abs();
        if w <= opts.x_tol {
            let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
            return Ok(Root { x, fx, iterations: it });
        }
        // Force a bisection when the bracket shrinks too slowly.
        if w > 0.5 * width {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(Root { x: m, fx: fm, iterations: it });
            }
            if (fm > 0.0) == (fa > 0.0) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            side = 0;
        }
        width = (b - a).abs();
    }
    let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    Ok(Root { x, fx, iterations: opts.max_iter })
}

/// Scans `n` equal steps on `[lo, hi]` and returns every sub-interval with a sign change.
pub fn sign_changes<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(lo);
    for i in 1..=n {
        let x1 = lo + (hi - lo) * i as f64 / n as f64;
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 == 0.0 || f0 * f1 < 0.0) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_find_cube_root() {
        let f = |x: f64| x * x * x - 2.0;
        let o = RootOptions {
            x_tol: 1e-15,
            ..Default::default()
        };
        let r1 = bisect(f, 0.0, 2.0, o).unwrap();
        let r2 = illinois(f, 0.0, 2.0, o).unwrap();
        let exact = 2f64.cbrt();
        assert!((r1.x - exact).abs() < 1e-14);
        assert!((r2.x - exact).abs() < 1e-14);
        assert!(r2.iterations < r1.iterations);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, RootOptions::default()),
            Err(Error::NoRoot(_))
        ));
    }

    #[test]
    fn scan_counts_roots() {
        let v = sign_changes(f64::sin, 0.5, 10.0, 100);
        assert_eq!(v.len(), 3);
    }
}
