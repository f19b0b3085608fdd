//! Command implementations.

use std::f64::consts::PI;

use spiralarc::approx::{solve_length_biarc, ApproxOptions, HermiteData};
use spiralarc::biarc::Biarc;
use spiralarc::bilens::Bilens;
use spiralarc::bounds::{angle_length_bounds, length_bounds};
use spiralarc::curve::PiecewiseConstCurve;
use spiralarc::geom::{ChordData, Point};
use spiralarc::model::{
    cochleoid_residual, endpoint_set, fixed_turning_subset, gamma2_canonical_check, SpiralModel,
};
use spiralarc::oval::{
    certify_closure, closeness_sweep, frame, solve_symmetric_limits, SweepOptions, Verdict,
};
use spiralarc::triarc::TriarcFamily;
use spiralarc::{model, oval, Exec};

use crate::doc::{Config, InputDoc, ModelMode, Resolved};
use crate::report::*;
use crate::svg::Figure;
use crate::table::{num, text, Table};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Approx,
    Bounds,
    Triarc,
    Model,
    Oval,
}

/// Everything a command produces; the caller decides where it goes.
pub struct Outputs {
    pub doc: OutputDoc,
    pub csv: Table,
    /// Named figures; an empty name marks the main one.
    pub svg: Vec<(String, Figure)>,
}

pub fn run(cmd: Command, input: &InputDoc, flags: &Config) -> Result<Outputs, CliError> {
    let cfg = input.config.over(flags);
    check(&cfg)?;
    match cmd {
        Command::Approx => approx(input, &cfg),
        Command::Bounds => bounds(input),
        Command::Triarc => triarc(input),
        Command::Model => run_model(input, &cfg),
        Command::Oval => run_oval(input, &cfg),
    }
}

fn check(cfg: &Config) -> Result<(), CliError> {
    let positive = |name: &str, v: Option<f64>| match v {
        Some(x) if !(x.is_finite() && x > 0.0) => {
            Err(CliError::validation(format!("{name} must be positive")))
        }
        _ => Ok(()),
    };
    positive("tol", cfg.tol)?;
    positive("mu_resolution", cfg.mu_resolution)?;
    if cfg.grid == Some(0) {
        return Err(CliError::validation("grid must be at least 1"));
    }
    if cfg.steps.is_some_and(|s| s < 2) {
        return Err(CliError::validation("steps must be at least 2"));
    }
    Ok(())
}

fn exec(cfg: &Config) -> Exec {
    if cfg.sequential == Some(true) {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn curve_input(input: &InputDoc) -> Result<Resolved, CliError> {
    input
        .curve
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [curve] section"))?
        .resolve()
}

fn xy(p: Point) -> [f64; 2] {
    [p.re, p.im]
}

fn samples(c: &PiecewiseConstCurve) -> Vec<Point> {
    c.sample(0.01 * c.length().max(1e-12), 0.01)
}

fn curve_rows(t: &mut Table, name: &str, c: &PiecewiseConstCurve) {
    for (i, p) in samples(c).into_iter().enumerate() {
        t.row(vec![text(name), i.to_string(), num(p.re), num(p.im)]);
    }
}

fn lens_arcs(ch: &ChordData) -> Vec<Vec<Point>> {
    [1e-9, 1e9]
        .iter()
        .filter_map(|&p| Biarc::from_chord(*ch, p).ok())
        .map(|b| samples(&b.to_curve()))
        .collect()
}

fn base_figure(title: &str, data: &HermiteData, input_curve: Option<&PiecewiseConstCurve>) -> Figure {
    let mut f = Figure::new(title);
    let ch = data.chord();
    f.line(vec![ch.a(), ch.b()], "#999999");
    for arc in lens_arcs(ch) {
        f.dashed(arc, "#4477aa");
    }
    if let HermiteData::G2(d) = data {
        if let Ok(bl) = Bilens::from_g2(d) {
            f.polygon(bl.boundary_polygon(), "#228833");
        }
    }
    if let Some(c) = input_curve {
        f.line(samples(c), "#000000");
    }
    f
}

fn approx(input: &InputDoc, cfg: &Config) -> Result<Outputs, CliError> {
    let r = curve_input(input)?;
    let length = r
        .length
        .ok_or_else(|| CliError::validation("approx needs the curve length"))?;
    let mut opts = ApproxOptions::default();
    if let Some(tol) = cfg.tol {
        opts.rel_tol = tol;
        opts.abs_tol = tol;
    }
    let res = solve_length_biarc(&r.data, length, &opts)?;
    let ch = *r.data.chord();
    let bc = res.biarc.to_curve();
    let hausdorff = r.curve.as_ref().map(|c| c.hausdorff(&bc, 0.01 * ch.c));
    let q = matches!(r.data, HermiteData::G2(_)).then_some([res.q1, res.q2]);
    let (k1, k2) = res.biarc.curvatures();
    let report = ApproxReport {
        c: ch.c,
        alpha: ch.alpha,
        beta: ch.beta,
        length,
        p: res.p0,
        curvatures: [k1, k2],
        arc_lengths: [res.biarc.segments[0].l, res.biarc.segments[1].l],
        join: xy(res.biarc.join_point()),
        q,
        width_bound: res.width_bound,
        hausdorff,
        biarc_input: res.biarc_input,
        ill_conditioned: res.ill_conditioned,
    };
    let mut t = Table::new(&["curve", "index", "x", "y"]);
    curve_rows(&mut t, "biarc", &bc);
    if let Some(c) = &r.curve {
        curve_rows(&mut t, "input", c);
    }
    let mut f = base_figure("biarc", &r.data, r.curve.as_ref());
    f.line(samples(&bc), "#cc3311");
    f.dots(&[res.biarc.join_point()], "#cc3311");
    Ok(Outputs {
        doc: OutputDoc::new(Report::Approx(report)),
        csv: t,
        svg: vec![(String::new(), f)],
    })
}

fn bounds(input: &InputDoc) -> Result<Outputs, CliError> {
    let r = curve_input(input)?;
    let b = match &r.data {
        HermiteData::G2(d) => length_bounds(d)?,
        HermiteData::G1(c) => angle_length_bounds(c)?,
    };
    let within = r.length.map(|l| {
        let tol = 1e-9 * l;
        b.lower <= l + tol && l <= b.upper + tol
    });
    let report = BoundsReport {
        chord: b.chord,
        outer_lower: b.outer_lower,
        lower: b.lower,
        upper: b.upper,
        outer_upper: b.outer_upper,
        ratios: b.ratios(),
        measured: r.length,
        within,
    };
    let mut t = Table::new(&["quantity", "length", "ratio"]);
    let names = ["outer_lower", "lower", "upper", "outer_upper"];
    let vals = [b.outer_lower, b.lower, b.upper, b.outer_upper];
    for ((n, v), q) in names.iter().zip(vals).zip(b.ratios()) {
        t.row(vec![text(*n), num(v), num(q)]);
    }
    if let Some(l) = r.length {
        t.row(vec![text("measured"), num(l), num(l / b.chord)]);
    }
    let f = base_figure("length bounds", &r.data, r.curve.as_ref());
    Ok(Outputs {
        doc: OutputDoc::new(Report::Bounds(report)),
        csv: t,
        svg: vec![(String::new(), f)],
    })
}

fn triarc(input: &InputDoc) -> Result<Outputs, CliError> {
    let r = curve_input(input)?;
    let d = r.g2()?;
    let family = TriarcFamily::build(&d)?;
    let target = input.target.as_ref();
    let t_param = target.and_then(|t| t.t);
    let t_len = target.and_then(|t| t.length);
    let tr = match (t_param, t_len.or(r.length)) {
        (Some(_), Some(_)) if t_len.is_some() => {
            return Err(CliError::validation("give either target.length or target.t"))
        }
        (Some(t), _) => family.at(t)?,
        (None, Some(l)) => family.solve_length(l)?,
        (None, None) => return Err(CliError::validation("triarc needs a target length or t")),
    };
    let (gap, ang) = tr.closure_gap(&d);
    let report = TriarcReport {
        t: tr.t,
        length: tr.length(),
        curvatures: tr.curvatures(),
        arc_lengths: tr.segments.map(|s| s.l),
        tangent_gaps: tr.tangent_gaps,
        closure: [gap, ang],
    };
    let tc = tr.to_curve();
    let mut t = Table::new(&["curve", "index", "x", "y"]);
    curve_rows(&mut t, "triarc", &tc);
    if let Some(c) = &r.curve {
        curve_rows(&mut t, "input", c);
    }
    let mut f = base_figure("triarc", &r.data, r.curve.as_ref());
    f.line(samples(&tc), "#cc3311");
    let joints: Vec<Point> = tc.breakpoints().iter().map(|p| p.point).collect();
    f.dots(&joints, "#cc3311");
    Ok(Outputs {
        doc: OutputDoc::new(Report::Triarc(report)),
        csv: t,
        svg: vec![(String::new(), f)],
    })
}

fn run_model(input: &InputDoc, cfg: &Config) -> Result<Outputs, CliError> {
    let m = input
        .model
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [model] section"))?;
    let sm = SpiralModel::new(m.k1, m.k2, m.length)?;
    let grid = cfg.grid.unwrap_or(model::DEFAULT_GRID);
    let ex = exec(cfg);
    let set = match m.mode {
        ModelMode::Endpoints => endpoint_set(&sm, grid, ex)?,
        ModelMode::FixedTurning => {
            let theta = m
                .theta
                .ok_or_else(|| CliError::validation("fixed-turning mode needs theta"))?;
            fixed_turning_subset(&sm, theta, grid, ex)?
        }
    };
    let enc = set.enclosure(cfg.tol.unwrap_or(1e-9), ex);
    let (cochleoid, gamma2) = match m.mode {
        ModelMode::Endpoints => (
            Some(cochleoid_residual(&sm, 512)),
            gamma2_canonical_check(&sm, 256).ok().map(|g| Gamma2Report {
                class: g.class,
                fixed_radius: g.fixed_radius,
                rolling_radius: g.rolling_radius,
                max_residual: g.max_residual,
            }),
        ),
        ModelMode::FixedTurning => (None, None),
    };
    let report = ModelReport {
        k1: m.k1,
        k2: m.k2,
        length: m.length,
        theta: set.theta,
        grid,
        points: set.points.len(),
        outside: enc.outside,
        max_excess: enc.max_excess,
        self_intersecting: enc.self_intersecting,
        cochleoid_residual: cochleoid,
        gamma2,
    };
    let mut t = Table::new(&["q1", "l1", "q2", "l2", "x", "y"]);
    for p in &set.points {
        t.row(vec![
            num(p.q1),
            num(p.l1),
            num(p.q2),
            num(p.l2),
            num(p.point.re),
            num(p.point.im),
        ]);
    }
    let mut f = Figure::new("endpoint set");
    let cloud: Vec<Point> = set.points.iter().map(|p| p.point).collect();
    f.dots(&cloud, "#bbbbbb");
    let colors = ["#cc3311", "#0077bb", "#ee7733", "#009988"];
    for (b, c) in set.bounds.iter().zip(colors) {
        f.line(b.points.clone(), c);
    }
    Ok(Outputs {
        doc: OutputDoc::new(Report::Model(report)),
        csv: t,
        svg: vec![(String::new(), f)],
    })
}

fn oval_figure(fr: &oval::SweepFrame) -> Figure {
    let mut f = Figure::new(format!("{:?} = {:.4} pi", fr.split, fr.angle / PI));
    f.dots(&fr.first.points, "#ee7733");
    f.dots(&fr.second.points, "#0077bb");
    for (s, c) in [(&fr.first, "#cc3311"), (&fr.second, "#004488")] {
        f.line(s.ab.clone(), c);
        f.line(s.cd.clone(), c);
    }
    if let Some(p) = fr.common {
        f.dots(&[p], "#000000");
    }
    f
}

fn run_oval(input: &InputDoc, cfg: &Config) -> Result<Outputs, CliError> {
    let o = input
        .oval
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [oval] section"))?;
    let spec = o.spec()?;
    let ex = exec(cfg);
    let opts = SweepOptions {
        grid: cfg.grid.unwrap_or(oval::DEFAULT_GRID),
        steps: cfg.steps.unwrap_or(oval::DEFAULT_STEPS),
        contact_tol: cfg.mu_resolution.unwrap_or(1e-3) * PI,
        exec: ex,
    };
    let predicted = match o.symmetric {
        Some([a, b]) => Some(solve_symmetric_limits(a, b)?),
        None => None,
    };
    let rep = closeness_sweep(&spec, o.split, &opts)?;
    let inside: Vec<f64> = rep
        .samples
        .iter()
        .filter(|s| s.intersects)
        .map(|s| s.angle)
        .collect();
    let mid = if inside.is_empty() {
        0.5 * (rep.range.0 + rep.range.1)
    } else {
        inside[inside.len() / 2]
    };
    let closure = if o.certify && rep.verdict == Verdict::Intersects {
        let c = certify_closure(&spec, o.split, mid, opts.grid, 1e-9, ex)?;
        Some(ClosureReport {
            angle: mid,
            gap: c.gap,
            turning: c.turning,
            convex: c.is_convex(),
            segments: c.curve.segments.iter().map(|s| [s.k, s.l]).collect(),
        })
    } else {
        None
    };
    let mut t = Table::new(&["angle", "angle_over_pi", "intersects", "overlap_area"]);
    for s in &rep.samples {
        t.row(vec![
            num(s.angle),
            num(s.angle / PI),
            s.intersects.to_string(),
            num(s.overlap_area),
        ]);
    }
    let mut figs = Vec::new();
    let mut angles: Vec<(String, f64)> = rep
        .contacts
        .iter()
        .enumerate()
        .map(|(i, a)| (format!("contact{i}"), *a))
        .collect();
    angles.push(("mid".into(), mid));
    for (name, a) in angles {
        let fr = frame(&spec, o.split, a, opts.grid, ex)?;
        figs.push((name, oval_figure(&fr)));
    }
    let report = OvalReport {
        k: spec.k,
        l: spec.l,
        split: o.split,
        grid: opts.grid,
        range: [rep.range.0, rep.range.1],
        contacts_pi: rep.contacts.iter().map(|c| c / PI).collect(),
        contacts: rep.contacts,
        verdict: rep.verdict,
        samples: rep.samples.len(),
        predicted,
        closure,
    };
    Ok(Outputs {
        doc: OutputDoc::new(Report::Oval(report)),
        csv: t,
        svg: figs,
    })
}
