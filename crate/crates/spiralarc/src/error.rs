use std::fmt;

use serde::{Deserialize, Serialize};

/// Which end of an admissible length range was violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Lower,
    Upper,
    /// The upper end is the convexity limit of the biarc family.
    Convexity,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Lower => "lower",
            Bound::Upper => "upper",
            Bound::Convexity => "convexity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("unsupported query: {0}")]
    Unsupported(String),
    #[error("degenerate lens: sin(omega) vanishes")]
    DegenerateLens,
    #[error("data is not convex: {0}")]
    NonConvex(String),
    #[error("length {length} outside admissible range [{lower}, {upper}] ({bound} bound violated)")]
    LengthOutOfRange {
        length: f64,
        lower: f64,
        upper: f64,
        bound: Bound,
    },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoRoot(_) | Error::Numerical(_))
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidData(_) => "invalid-data",
            Error::Unsupported(_) => "unsupported",
            Error::DegenerateLens => "degenerate-lens",
            Error::NonConvex(_) => "non-convex",
            Error::LengthOutOfRange { .. } => "length-out-of-range",
            Error::Infeasible(_) => "infeasible",
            Error::NoRoot(_) => "no-root",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidData(msg.into())
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} is not finite")))
    }
}
