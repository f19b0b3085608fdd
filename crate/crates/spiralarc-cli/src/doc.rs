//! Input documents.

use serde::{Deserialize, Serialize};
use spiralarc::approx::HermiteData;
use spiralarc::curve::{chord_frame, PiecewiseConstCurve, Segment};
use spiralarc::geom::{pt, ChordData, G2ChordData, Pose, RigidMotion};
use spiralarc::oval::{OvalSpec, Split};

use crate::CliError;

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub version: u32,
    #[serde(default)]
    pub config: Config,
    pub curve: Option<CurveInput>,
    pub target: Option<TargetInput>,
    pub model: Option<ModelInput>,
    pub oval: Option<OvalInput>,
}

/// Run settings; any value given here wins over the command line.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub mu_resolution: Option<f64>,
    pub steps: Option<usize>,
    pub sequential: Option<bool>,
}

impl Config {
    /// `self` over `flags`.
    pub fn over(&self, flags: &Config) -> Config {
        Config {
            grid: self.grid.or(flags.grid),
            tol: self.tol.or(flags.tol),
            mu_resolution: self.mu_resolution.or(flags.mu_resolution),
            steps: self.steps.or(flags.steps),
            sequential: self.sequential.or(flags.sequential),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveInput {
    Chord(ChordInput),
    Segments(SegmentsInput),
}

/// End data in the chord frame; curvatures are optional for tangent-only input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChordInput {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub length: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentsInput {
    #[serde(default)]
    pub start: PoseInput,
    /// `[curvature, length]` pairs.
    pub segments: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseInput {
    #[serde(default)]
    pub x: f64,
    #[serde(default)]
    pub y: f64,
    #[serde(default)]
    pub tau: f64,
}

/// Triarc selection: a target length or a family parameter in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetInput {
    pub length: Option<f64>,
    pub t: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelMode {
    #[default]
    Endpoints,
    FixedTurning,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelInput {
    pub k1: f64,
    pub k2: f64,
    pub length: f64,
    #[serde(default)]
    pub mode: ModelMode,
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvalInput {
    pub k: Option<[f64; 4]>,
    pub l: Option<[f64; 4]>,
    /// `[κ₁, κ₂]` for equal unit arcs; enables the predicted limits.
    pub symmetric: Option<[f64; 2]>,
    #[serde(default = "default_split")]
    pub split: Split,
    /// Also close the oval at the middle of the overlap interval.
    #[serde(default)]
    pub certify: bool,
}

fn default_split() -> Split {
    Split::Mu
}

/// Curve input resolved to chord-frame data.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub data: HermiteData,
    pub length: Option<f64>,
    /// The input curve in its chord frame, when given as segments.
    pub curve: Option<PiecewiseConstCurve>,
}

impl Resolved {
    pub fn g2(&self) -> Result<G2ChordData, CliError> {
        match self.data {
            HermiteData::G2(d) => Ok(d),
            HermiteData::G1(_) => Err(CliError::validation(
                "end curvatures k1 and k2 are required",
            )),
        }
    }
}

impl CurveInput {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        match self {
            CurveInput::Chord(c) => {
                let chord = ChordData::new(c.c, c.alpha, c.beta)?;
                let data = match (c.k1, c.k2) {
                    (Some(k1), Some(k2)) => HermiteData::G2(G2ChordData { chord, k1, k2 }),
                    (None, None) => HermiteData::G1(chord),
                    _ => return Err(CliError::validation("give both k1 and k2 or neither")),
                };
                Ok(Resolved {
                    data,
                    length: c.length,
                    curve: None,
                })
            }
            CurveInput::Segments(s) => {
                if s.segments.is_empty() {
                    return Err(CliError::validation("segment list is empty"));
                }
                let start = Pose::new(pt(s.start.x, s.start.y), s.start.tau);
                let segs = s.segments.iter().map(|[k, l]| Segment::new(*k, *l)).collect();
                let curve = PiecewiseConstCurve::new(start, segs)?;
                let (d, m): (G2ChordData, RigidMotion) = chord_frame(&curve)?;
                Ok(Resolved {
                    data: HermiteData::G2(d),
                    length: Some(curve.length()),
                    curve: Some(curve.transformed(&m)),
                })
            }
        }
    }
}

impl OvalInput {
    pub fn spec(&self) -> Result<OvalSpec, CliError> {
        match (self.symmetric, self.k, self.l) {
            (Some([a, b]), None, None) => Ok(OvalSpec::symmetric(a, b)?),
            (None, Some(k), Some(l)) => Ok(OvalSpec::new(k, l)?),
            _ => Err(CliError::validation(
                "give either `symmetric` or both `k` and `l`",
            )),
        }
    }
}

pub fn parse(text: &str) -> Result<InputDoc, CliError> {
    let doc: InputDoc =
        toml::from_str(text).map_err(|e| CliError::validation(format!("input: {e}")))?;
    if doc.version != VERSION {
        return Err(CliError::validation(format!(
            "unsupported input version {} (expected {VERSION})",
            doc.version
        )));
    }
    Ok(doc)
}
