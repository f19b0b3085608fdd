#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spiralarc::curve::{PiecewiseConstCurve, Segment};
use spiralarc::geom::{pt, Pose};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random convex piecewise-constant spiral with total turning up to `max_turn`.
pub fn convex_spiral(r: &mut impl Rng, max_turn: f64) -> PiecewiseConstCurve {
    loop {
        let c = monotone_spiral(r, max_turn);
        if c.is_convex_arc() {
            return c;
        }
    }
}

/// Random piecewise-constant spiral whose curvature keeps one sign.
pub fn monotone_spiral(r: &mut impl Rng, max_turn: f64) -> PiecewiseConstCurve {
    let n = r.random_range(2..=5);
    let mut levels: Vec<f64> = (0..n).map(|_| r.random_range(0.0..3.0)).collect();
    levels.sort_by(f64::total_cmp);
    if r.random_bool(0.15) {
        levels[0] = 0.0;
    }
    if levels[n - 1] - levels[0] < 0.05 {
        levels[n - 1] = levels[0] + r.random_range(0.05..1.0);
    }
    let mut lengths: Vec<f64> = (0..n).map(|_| r.random_range(0.1..1.0)).collect();
    let turning: f64 = levels.iter().zip(&lengths).map(|(k, l)| k * l).sum();
    let target = r.random_range(0.2..max_turn);
    lengths.iter_mut().for_each(|l| *l *= target / turning);
    if r.random_bool(0.5) {
        levels.reverse();
        lengths.reverse();
    }
    let sign = if r.random_bool(0.5) { 1.0 } else { -1.0 };
    let segments = levels
        .iter()
        .zip(&lengths)
        .map(|(k, l)| Segment::new(sign * k, *l))
        .collect();
    let start = Pose::new(
        pt(r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)),
        r.random_range(-PI..PI),
    );
    PiecewiseConstCurve::new(start, segments).unwrap()
}

pub fn convex_spirals(seed: u64, n: usize, max_turn: f64) -> Vec<PiecewiseConstCurve> {
    let mut r = rng(seed);
    (0..n).map(|_| convex_spiral(&mut r, max_turn)).collect()
}
