mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use spiralarc::approx::{solve_length_biarc, ApproxOptions, RootMethod};
use spiralarc::biarc::{convexity_threshold, Biarc, BiarcParams};
use spiralarc::bilens::{boundary_parameters, Bilens};
use spiralarc::bounds::length_bounds;
use spiralarc::curve::chord_frame;
use spiralarc::geom::{
    is_short_spiral_data, pt, q_invariant, unit, vogt_sign_ok, wrap_angle, ChordData, Circle,
    G2ChordData, Pose, EPS,
};
use spiralarc::mobius::{Branch, MobiusMap};
use spiralarc::model::{endpoint_set, SpiralModel};
use spiralarc::region::{convex_hull, polygon_area};
use spiralarc::triarc::TriarcFamily;
use spiralarc::Exec;

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Convex spiral data in its chord frame, with the spiral's length.
fn spiral_data() -> impl Strategy<Value = (G2ChordData, f64)> {
    any::<u64>().prop_map(|seed| {
        let c = common::convex_spiral(&mut common::rng(seed), 1.9 * PI);
        (chord_frame(&c).unwrap().0, c.length())
    })
}

fn non_biarc_data() -> impl Strategy<Value = (G2ChordData, f64)> {
    spiral_data().prop_filter("non-biarc data", |(d, _)| q_invariant(d) < -1e-6)
}

/// Tangent pair with increasing curvature and a short lens.
fn tangents() -> impl Strategy<Value = ChordData> {
    (0.05..PI - 0.05, 0.05..PI - 0.05)
        .prop_filter("positive sum", |(a, b)| b - a > 0.02)
        .prop_map(|(a, b)| ChordData::new(1.0, -a, b).unwrap())
}

/// Signed radius of the circle tangent to `tau` at `x` with curvature `k`.
fn circle(x: spiralarc::geom::Point, tau: f64, k: f64) -> Circle {
    Circle {
        center: x + unit(tau) * pt(0.0, 1.0 / k),
        radius: 1.0 / k,
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn short_data_satisfies_vogt(
        c in 0.1..3.0f64, a in -PI..PI, b in -PI..PI, k1 in -3.0..3.0f64, k2 in -3.0..3.0f64,
    ) {
        let d = G2ChordData::new(c, a, b, k1, k2).unwrap();
        if let Ok(true) = is_short_spiral_data(&d, EPS) {
            prop_assert!(vogt_sign_ok(&d, EPS));
        }
    }

    #[test]
    fn invariant_matches_the_circle_angle(
        a in -PI..PI, b in -PI..PI, k1 in 0.1..3.0f64, s1 in any::<bool>(),
        k2 in 0.1..3.0f64, s2 in any::<bool>(),
    ) {
        let (k1, k2) = (if s1 { k1 } else { -k1 }, if s2 { k2 } else { -k2 });
        let d = G2ChordData::new(1.0, a, b, k1, k2).unwrap();
        let (c1, c2) = (circle(d.chord.a(), a, k1), circle(d.chord.b(), b, k2));
        let dist = (c1.center - c2.center).norm_sqr();
        let (r1, r2) = (c1.radius, c2.radius);
        let geometric = (dist - (r1 - r2).powi(2)) / (4.0 * r1 * r2);
        prop_assert!((q_invariant(&d) - geometric).abs() <= 1e-10 * (1.0 + geometric.abs()));
    }

    #[test]
    fn chord_frame_inverts(seed in any::<u64>()) {
        let c = common::convex_spiral(&mut common::rng(seed), 1.9 * PI);
        let (d, m) = chord_frame(&c).unwrap();
        let back = m.inverse().apply_pose(d.chord.start());
        prop_assert!((back.point - c.start.point).norm() <= 1e-12 * (1.0 + c.start.point.norm()));
        prop_assert!(wrap_angle(back.tau - c.start.tau).abs() <= 1e-12);
    }

    #[test]
    fn traced_biarc_returns_its_angles(ch in tangents(), p in 0.01..100.0f64, tau in -PI..PI) {
        let b = Biarc::from_chord(ch, p).unwrap();
        let curve = b.to_curve().transformed(&spiralarc::geom::RigidMotion::new(tau, pt(0.3, -2.0)));
        let (d, _) = chord_frame(&curve).unwrap();
        prop_assert!((d.chord.c - ch.c).abs() <= 1e-12);
        prop_assert!(wrap_angle(d.chord.alpha - ch.alpha).abs() <= 1e-10);
        prop_assert!(wrap_angle(d.chord.beta - ch.beta).abs() <= 1e-10);
    }

    #[test]
    fn family_members_are_biarc_data(ch in tangents(), p in 0.001..1000.0f64) {
        let (a, b) = BiarcParams::new(ch, p).unwrap().curvatures();
        let d = G2ChordData { chord: ch, k1: a, k2: b };
        prop_assert!(q_invariant(&d).abs() <= 1e-12 * (1.0 + a.abs() * b.abs()));
    }

    #[test]
    fn biarcs_close_on_the_chord(ch in tangents(), p in 0.001..1000.0f64) {
        let end = Biarc::from_chord(ch, p).unwrap().to_curve().end();
        prop_assert!((end.point - ch.b()).norm() <= 1e-9);
        prop_assert!(wrap_angle(end.tau - ch.beta).abs() <= 1e-9);
    }

    #[test]
    fn curvatures_stay_beyond_the_asymptotes(ch in tangents(), p in 0.001..1000.0f64) {
        prop_assume!(ch.omega().sin() > 1e-6);
        let (a, b) = BiarcParams::new(ch, p).unwrap().normalized_curvatures();
        prop_assert!(a < -ch.alpha.sin());
        prop_assert!(b > ch.beta.sin());
    }

    #[test]
    fn join_points_are_concyclic(ch in tangents()) {
        let join = |p: f64| BiarcParams::new(ch, p).unwrap().join_point();
        let circ = Circle::through(join(0.3), join(1.0), join(3.0)).unwrap();
        for p in [0.01, 0.1, 0.7, 2.0, 10.0, 100.0] {
            let r = ((join(p) - circ.center).norm() - circ.radius.abs()).abs();
            prop_assert!(r < 1e-10 * (1.0 + circ.radius.abs()));
        }
    }

    #[test]
    fn convexity_splits_the_family(ch in tangents()) {
        let th = convexity_threshold(&ch).unwrap();
        prop_assume!(th.attainable);
        let ab = |p: f64| {
            let (a, b) = BiarcParams::new(ch, p).unwrap().normalized_curvatures();
            a * b
        };
        let below: Vec<f64> = [0.2, 0.5, 0.9].iter().map(|f| ab(f * th.p_bar)).collect();
        let above: Vec<f64> = [1.1, 2.0, 5.0].iter().map(|f| ab(f * th.p_bar)).collect();
        let (nb, na) = (below.iter().all(|v| *v >= 0.0), above.iter().all(|v| *v >= 0.0));
        let (sb, sa) = (below.iter().all(|v| *v < 0.0), above.iter().all(|v| *v < 0.0));
        prop_assert!((nb && sa) || (sb && na));
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn bilens_holds_its_family((d, _) in non_biarc_data()) {
        let lens = Bilens::from_g2(&d).unwrap();
        let c = d.chord.c;
        for f in [0.1, 0.4, 0.7, 0.95] {
            let p = lens.p1 + f * (lens.p2 - lens.p1);
            let b = Biarc::from_chord(d.chord, p).unwrap().to_curve();
            for x in b.sample(0.02 * c, 0.05) {
                prop_assert!(lens.encloses_point(x, 1e-9 * c));
            }
        }
    }

    #[test]
    fn bilens_encloses_the_spiral(seed in any::<u64>()) {
        let curve = common::convex_spiral(&mut common::rng(seed), 1.9 * PI);
        let (d, m) = chord_frame(&curve).unwrap();
        prop_assume!(q_invariant(&d) < -1e-6);
        let lens = Bilens::from_g2(&d).unwrap();
        for x in curve.transformed(&m).sample(0.01 * d.chord.c, 0.02) {
            prop_assert!(lens.encloses_point(x, 1e-9 * d.chord.c));
        }
    }

    #[test]
    fn bilens_is_reflection_invariant((d, _) in non_biarc_data()) {
        let (p1, p2) = boundary_parameters(&d).unwrap();
        let (r1, r2) = boundary_parameters(&d.reflect_x()).unwrap();
        prop_assert!((p1 - r1).abs() <= 1e-12 * p1 && (p2 - r2).abs() <= 1e-12 * p2);
    }

    #[test]
    fn width_scales_with_the_chord((d, _) in non_biarc_data(), s in 0.1..10.0f64) {
        let big = G2ChordData::new(s * d.chord.c, d.chord.alpha, d.chord.beta, d.k1 / s, d.k2 / s).unwrap();
        let (w, ws) = (Bilens::from_g2(&d).unwrap().width(), Bilens::from_g2(&big).unwrap().width());
        prop_assert!((ws - s * w).abs() <= 1e-10 * s * (w + d.chord.c));
    }

    #[test]
    fn root_finders_agree((d, l) in non_biarc_data()) {
        let solve = |method| solve_length_biarc(&d.into(), l, &ApproxOptions { method, ..Default::default() }).unwrap();
        let (a, b) = (solve(RootMethod::Bisection), solve(RootMethod::Illinois));
        prop_assert!((a.p0 - b.p0).abs() <= 1e-10 * a.p0.max(b.p0));
    }

    #[test]
    fn approximation_keeps_the_turning((d, l) in spiral_data()) {
        let r = solve_length_biarc(&d.into(), l, &ApproxOptions::default()).unwrap();
        let (t1, t2) = r.biarc.params.turnings();
        prop_assert!((t1 + t2 - (d.chord.beta - d.chord.alpha)).abs() <= 1e-12);
    }

    #[test]
    fn inner_bounds_are_the_boundary_biarcs((d, _) in non_biarc_data()) {
        let b = length_bounds(&d).unwrap();
        let (p1, p2) = boundary_parameters(&d).unwrap();
        let s1 = BiarcParams::new(d.chord, p1).unwrap().total_length();
        let s2 = BiarcParams::new(d.chord, p2).unwrap().total_length();
        let tol = 1e-10 * b.upper;
        prop_assert!((b.lower - s1.min(s2)).abs() <= tol);
        prop_assert!((b.upper - s1.max(s2)).abs() <= tol);
        prop_assert!(b.outer_lower < b.lower && b.lower <= b.upper && b.upper <= b.outer_upper + tol);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn mobius_images_of_circles_are_circles((d, _) in non_biarc_data()) {
        let m = MobiusMap::concentric(&d, Branch::Plus).unwrap();
        let lens = Bilens::from_g2(&d).unwrap();
        let c = d.chord.c;
        let mut circles = Vec::new();
        for (x, tau, k) in [(d.chord.a(), d.chord.alpha, d.k1), (d.chord.b(), d.chord.beta, d.k2)] {
            if k.abs() * c > 1e-6 {
                circles.push(circle(x, tau, k));
            }
        }
        for b in [&lens.first, &lens.second] {
            let mut p = b.start;
            for s in &b.segments {
                if s.k.abs() * c > 1e-6 {
                    circles.push(circle(p.point, p.tau, s.k));
                }
                p = s.end_from(p);
            }
        }
        for circ in circles {
            let on = |t: f64| circ.center + unit(t) * circ.radius.abs();
            let pts = [0.3, 1.7, 3.4, 5.0].map(|t| m.apply(on(t)));
            if pts.iter().any(|x| x.norm() > 1e6 * c) {
                continue;
            }
            match Circle::through(pts[0], pts[1], pts[2]) {
                Ok(img) => {
                    let r = ((pts[3] - img.center).norm() - img.radius.abs()).abs();
                    prop_assert!(r <= 1e-10 * (c + img.radius.abs()));
                }
                // A circle through the pole maps to a line.
                Err(_) => {
                    let (u, v) = (pts[1] - pts[0], pts[3] - pts[0]);
                    prop_assert!(spiralarc::geom::cross(u, v).abs() <= 1e-10 * u.norm() * v.norm());
                }
            }
        }
    }

    #[test]
    fn triarc_lengths_fill_the_bounds((d, _) in non_biarc_data()) {
        let fam = TriarcFamily::build(&d).unwrap();
        let b = length_bounds(&d).unwrap();
        let n = 1000;
        let ls: Vec<f64> = (0..=n).map(|i| fam.length_at(i as f64 / n as f64).unwrap()).collect();
        let ends = [ls[0], ls[n]];
        let span = b.upper - b.lower;
        prop_assert!((ends[0].min(ends[1]) - b.lower).abs() <= 1e-9 * b.upper);
        prop_assert!((ends[0].max(ends[1]) - b.upper).abs() <= 1e-9 * b.upper);
        let diffs: Vec<f64> = ls.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for i in 1..diffs.len() - 1 {
            let local = diffs[i - 1].max(diffs[i + 1]);
            prop_assert!(diffs[i] <= 10.0 * local + 1e-12 * b.upper, "jump at {}", i);
        }
        // 64 samples, each new one splitting the widest length gap; a jump would never close.
        let mut ts = vec![0.0, 1.0];
        while ts.len() < 64 {
            let gaps: Vec<f64> = ts
                .windows(2)
                .map(|w| (fam.length_at(w[1]).unwrap() - fam.length_at(w[0]).unwrap()).abs())
                .collect();
            let i = (0..gaps.len()).max_by(|&a, &b| gaps[a].total_cmp(&gaps[b])).unwrap();
            ts.insert(i + 1, 0.5 * (ts[i] + ts[i + 1]));
        }
        let mut swept: Vec<f64> = ts.iter().map(|&t| fam.length_at(t).unwrap()).collect();
        swept.sort_by(f64::total_cmp);
        let gap = swept.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        prop_assert!(gap < span / 16.0);
    }

    #[test]
    fn triarcs_are_monotone_spirals((d, _) in non_biarc_data(), t in 0.0..1.0f64) {
        let tr = TriarcFamily::build(&d).unwrap().at(t).unwrap();
        let [a, b, c] = tr.curvatures();
        let sg = (d.k2 - d.k1).signum();
        prop_assert!(sg * (b - a) > 0.0 && sg * (c - b) > 0.0);
        prop_assert!(tr.tangent_gaps[0].max(tr.tangent_gaps[1]) <= 1e-9);
    }

    #[test]
    fn clouds_follow_rigid_motions(
        k1 in -2.0..2.0f64, k2 in -2.0..2.0f64, l in 0.5..3.0f64,
        x in -3.0..3.0f64, y in -3.0..3.0f64, tau in -PI..PI,
    ) {
        prop_assume!((k2 - k1).abs() > 0.05);
        let m = SpiralModel::new(k1, k2, l).unwrap();
        let start = Pose::new(pt(x, y), tau);
        let a = endpoint_set(&m, 6, Exec::Sequential).unwrap();
        let b = endpoint_set(&m.with_start(start), 6, Exec::Sequential).unwrap();
        let map = |z| start.point + unit(tau) * z;
        for (p, q) in a.points.iter().zip(&b.points) {
            prop_assert!((map(p.point) - q.point).norm() <= 1e-12 * (1.0 + l + start.point.norm()));
        }
        for (p, q) in a.bounds.iter().zip(&b.bounds) {
            for (u, v) in p.points.iter().zip(&q.points) {
                prop_assert!((map(*u) - *v).norm() <= 1e-12 * (1.0 + l + start.point.norm()));
            }
        }
    }

    #[test]
    fn finer_grids_cover_more(k1 in -2.0..2.0f64, k2 in -2.0..2.0f64, l in 0.5..3.0f64) {
        prop_assume!((k2 - k1).abs() > 0.05);
        let m = SpiralModel::new(k1, k2, l).unwrap();
        let hull = |g| {
            let s = endpoint_set(&m, g, Exec::Sequential).unwrap();
            let pts: Vec<_> = s.points.iter().map(|p| p.point).collect();
            polygon_area(&convex_hull(&pts)).abs()
        };
        let (a, b) = (hull(4), hull(8));
        prop_assert!(a <= b * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn clouds_stay_inside_their_bounds(
        k1 in 0.0..2.0f64, k2 in 0.0..2.0f64, l in 0.5..3.0f64, negative in any::<bool>(),
    ) {
        prop_assume!((k2 - k1).abs() > 0.05);
        let (k1, k2) = if negative { (-k1, -k2) } else { (k1, k2) };
        let m = SpiralModel::new(k1, k2, l).unwrap();
        let s = endpoint_set(&m, 8, Exec::Sequential).unwrap();
        let rep = s.enclosure(1e-9 * (1.0 + l), Exec::Sequential);
        prop_assert_eq!(rep.outside, 0, "max excess {}", rep.max_excess);
    }
}
