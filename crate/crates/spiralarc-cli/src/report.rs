//! Result documents written by the commands.

use serde::{Deserialize, Serialize};
use spiralarc::model::CycloidClass;
use spiralarc::oval::{Split, SymmetricLimits, Verdict};

use crate::doc::VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDoc {
    pub version: u32,
    pub report: Report,
}

impl OutputDoc {
    pub fn new(report: Report) -> Self {
        OutputDoc {
            version: VERSION,
            report,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report documents serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Approx(ApproxReport),
    Bounds(BoundsReport),
    Triarc(TriarcReport),
    Model(ModelReport),
    Oval(OvalReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub length: f64,
    pub p: f64,
    pub curvatures: [f64; 2],
    pub arc_lengths: [f64; 2],
    pub join: [f64; 2],
    /// Arc curvatures in units of the end data, present for G² input.
    pub q: Option<[f64; 2]>,
    pub width_bound: Option<f64>,
    /// Sampled Hausdorff distance to the input curve.
    pub hausdorff: Option<f64>,
    pub biarc_input: bool,
    pub ill_conditioned: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub chord: f64,
    pub outer_lower: f64,
    pub lower: f64,
    pub upper: f64,
    pub outer_upper: f64,
    /// The four bounds divided by the chord.
    pub ratios: [f64; 4],
    pub measured: Option<f64>,
    pub within: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriarcReport {
    pub t: f64,
    pub length: f64,
    pub curvatures: [f64; 3],
    pub arc_lengths: [f64; 3],
    pub tangent_gaps: [f64; 2],
    /// Distance and tangent mismatch at the chord end.
    pub closure: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub k1: f64,
    pub k2: f64,
    pub length: f64,
    pub theta: Option<f64>,
    pub grid: usize,
    pub points: usize,
    pub outside: usize,
    pub max_excess: f64,
    pub self_intersecting: bool,
    pub cochleoid_residual: Option<f64>,
    pub gamma2: Option<Gamma2Report>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gamma2Report {
    pub class: CycloidClass,
    pub fixed_radius: f64,
    pub rolling_radius: Option<f64>,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OvalReport {
    pub k: [f64; 4],
    pub l: [f64; 4],
    pub split: Split,
    pub grid: usize,
    pub range: [f64; 2],
    pub contacts: Vec<f64>,
    /// Contacts as multiples of π.
    pub contacts_pi: Vec<f64>,
    pub verdict: Verdict,
    pub samples: usize,
    pub predicted: Option<SymmetricLimits>,
    pub closure: Option<ClosureReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub angle: f64,
    pub gap: f64,
    pub turning: f64,
    pub convex: bool,
    /// `[curvature, length]` of the eight arcs.
    pub segments: Vec<[f64; 2]>,
}
