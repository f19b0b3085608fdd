//! Length-preserving biarc approximation of a convex spiral.

use serde::{Deserialize, Serialize};

use crate::biarc::{
    convexity_threshold, length_at_infinity, length_at_zero, length_monotonicity, Biarc,
    BiarcParams, Monotonicity,
};
use crate::bilens::{boundary_parameters, Bilens};
use crate::error::{invalid, Bound, Error, Result};
use crate::geom::{q_invariant, ChordData, G2ChordData, EPS};
use crate::roots::{bisect, illinois, RootOptions};

/// Hermite data of the curve to approximate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "lowercase")]
pub enum HermiteData {
    G1(ChordData),
    G2(G2ChordData),
}

impl HermiteData {
    pub fn chord(&self) -> &ChordData {
        match self {
            HermiteData::G1(c) => c,
            HermiteData::G2(d) => &d.chord,
        }
    }
}

impl From<ChordData> for HermiteData {
    fn from(c: ChordData) -> Self {
        HermiteData::G1(c)
    }
}

impl From<G2ChordData> for HermiteData {
    fn from(d: G2ChordData) -> Self {
        HermiteData::G2(d)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootMethod {
    Bisection,
    #[default]
    Illinois,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxOptions {
    pub method: RootMethod,
    /// Relative length tolerance, scaled by the target length.
    pub rel_tol: f64,
    /// Absolute length tolerance, scaled by the half-chord.
    pub abs_tol: f64,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            method: RootMethod::Illinois,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
        }
    }
}

impl ApproxOptions {
    pub fn length_tol(&self, c: f64, length: f64) -> f64 {
        (self.abs_tol * c).max(self.rel_tol * length)
    }
}

/// Parameter interval on which `S(p)` sweeps the admissible lengths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub p_lo: f64,
    pub p_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
}

impl Bracket {
    fn new(chord: &ChordData, p_lo: f64, p_hi: f64) -> Result<Self> {
        Ok(Bracket {
            p_lo,
            p_hi,
            s_lo: BiarcParams::new(*chord, p_lo)?.total_length(),
            s_hi: BiarcParams::new(*chord, p_hi)?.total_length(),
        })
    }

    pub fn min_length(&self) -> f64 {
        self.s_lo.min(self.s_hi)
    }

    pub fn max_length(&self) -> f64 {
        self.s_lo.max(self.s_hi)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxResult {
    pub biarc: Biarc,
    pub p0: f64,
    pub q1: f64,
    pub q2: f64,
    /// Width of the bilens of the G² data, absent for G¹ input.
    pub width_bound: Option<f64>,
    pub bracket: Bracket,
    /// Set when `S` is nearly constant and `p0` is chosen rather than solved for.
    pub ill_conditioned: bool,
    /// The G² data is itself a biarc.
    pub biarc_input: bool,
    pub iterations: usize,
}

/// `S(p) − L`.
pub fn length_residual(chord: &ChordData, length: f64, p: f64) -> f64 {
    BiarcParams { chord: *chord, p }.total_length() - length
}

fn check_convex_g2(d: &G2ChordData) -> Result<()> {
    let tol = EPS * (1.0 + d.k1.abs().max(d.k2.abs()));
    let nonneg = d.k1 >= -tol && d.k2 >= -tol;
    let nonpos = d.k1 <= tol && d.k2 <= tol;
    if !(nonneg || nonpos) {
        return Err(Error::NonConvex(format!(
            "end curvatures {} and {} change sign",
            d.k1, d.k2
        )));
    }
    if (d.k2 - d.k1).abs() <= tol {
        return Err(Error::Unsupported(
            "equal end curvatures: a circle, not a spiral".into(),
        ));
    }
    Ok(())
}

/// Bracket of `p` values whose biarcs cover the admissible lengths.
///
/// For G¹ data the open end is grown geometrically until it passes `length`.
pub fn admissible_bracket(data: &HermiteData, length: f64) -> Result<Bracket> {
    match data {
        HermiteData::G2(d) => {
            check_convex_g2(d)?;
            let (p1, p2) = boundary_parameters(d)?;
            if !(p1 > 0.0 && p2 > 0.0) {
                return Err(invalid("boundary biarcs are not short"));
            }
            Bracket::new(&d.chord, p1.min(p2), p1.max(p2))
        }
        HermiteData::G1(ch) => {
            let th = convexity_threshold(ch)?;
            if !th.attainable {
                return Err(Error::NonConvex(
                    "no convex biarc exists for these end tangents".into(),
                ));
            }
            let p_bar = th.p_bar;
            let s_bar = BiarcParams::new(*ch, p_bar)?.total_length();
            match length_monotonicity(ch, 1e-12) {
                Monotonicity::Decreasing => {
                    let inf = length_at_infinity(ch);
                    if length <= inf {
                        return Err(Error::LengthOutOfRange {
                            length,
                            lower: inf,
                            upper: s_bar,
                            bound: Bound::Lower,
                        });
                    }
                    let mut hi = (2.0 * p_bar).max(1.0);
                    for _ in 0..2000 {
                        if length_residual(ch, length, hi) < 0.0 {
                            return Bracket::new(ch, p_bar, hi);
                        }
                        hi *= 2.0;
                    }
                    Err(Error::Numerical("could not bracket the length from above".into()))
                }
                Monotonicity::Increasing => {
                    let zero = length_at_zero(ch);
                    if length <= zero {
                        return Err(Error::LengthOutOfRange {
                            length,
                            lower: zero,
                            upper: s_bar,
                            bound: Bound::Lower,
                        });
                    }
                    let mut lo = 0.5 * p_bar.min(1.0);
                    for _ in 0..2000 {
                        if length_residual(ch, length, lo) < 0.0 {
                            return Bracket::new(ch, lo, p_bar);
                        }
                        lo *= 0.5;
                    }
                    Err(Error::Numerical("could not bracket the length from below".into()))
                }
                Monotonicity::Constant => Bracket::new(ch, p_bar, p_bar),
            }
        }
    }
}

/// Finds the biarc with the given end data and length.
pub fn solve_length_biarc(data: &HermiteData, length: f64, opts: &ApproxOptions) -> Result<ApproxResult> {
    let ch = *data.chord();
    if !(length.is_finite() && length > 0.0) {
        return Err(invalid("length must be positive"));
    }
    let tol = opts.length_tol(ch.c, length);
    let (biarc_input, width_bound) = match data {
        HermiteData::G2(d) => {
            check_convex_g2(d)?;
            let q = q_invariant(d);
            if q > EPS {
                return Err(invalid(format!(
                    "no non-biarc spiral has these end data (Q = {q})"
                )));
            }
            let bl = Bilens::from_g2(d)?;
            (bl.is_degenerate(), Some(bl.width()))
        }
        HermiteData::G1(_) => (false, None),
    };
    let bracket = admissible_bracket(data, length)?;
    let upper_bound = match data {
        HermiteData::G1(_) => Bound::Convexity,
        HermiteData::G2(_) => Bound::Upper,
    };
    let slack = tol.max(1e-9 * length);
    if length < bracket.min_length() - slack || length > bracket.max_length() + slack {
        return Err(Error::LengthOutOfRange {
            length,
            lower: bracket.min_length(),
            upper: bracket.max_length(),
            bound: if length < bracket.min_length() {
                Bound::Lower
            } else {
                upper_bound
            },
        });
    }

    let near_equal = (ch.alpha - ch.beta).abs() < 1e-8;
    let (p0, iterations) = if biarc_input {
        (0.5 * (bracket.p_lo + bracket.p_hi), 0)
    } else if near_equal || bracket.p_lo == bracket.p_hi {
        (1f64.clamp(bracket.p_lo, bracket.p_hi), 0)
    } else if length <= bracket.min_length() {
        (if bracket.s_lo <= bracket.s_hi { bracket.p_lo } else { bracket.p_hi }, 0)
    } else if length >= bracket.max_length() {
        (if bracket.s_lo >= bracket.s_hi { bracket.p_lo } else { bracket.p_hi }, 0)
    } else {
        let ro = RootOptions {
            f_tol: 1e-4 * tol,
            x_tol: 4.0 * f64::EPSILON * bracket.p_hi,
            max_iter: 500,
        };
        let f = |p: f64| length_residual(&ch, length, p);
        let r = match opts.method {
            RootMethod::Bisection => bisect(f, bracket.p_lo, bracket.p_hi, ro)?,
            RootMethod::Illinois => illinois(f, bracket.p_lo, bracket.p_hi, ro)?,
        };
        (r.x, r.iterations)
    };
    let biarc = Biarc::new(BiarcParams::new(ch, p0)?);
    let residual = (biarc.length() - length).abs();
    if residual > tol && !near_equal && !biarc_input {
        return Err(Error::Numerical(format!(
            "length residual {residual} exceeds tolerance {tol}"
        )));
    }
    let (q1, q2) = biarc.curvatures();
    Ok(ApproxResult {
        biarc,
        p0,
        q1,
        q2,
        width_bound,
        bracket,
        ill_conditioned: near_equal,
        biarc_input,
        iterations,
    })
}
