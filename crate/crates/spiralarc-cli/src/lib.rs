//! Command line front end: versioned TOML input, TOML reports, CSV tables and SVG figures.

pub mod doc;
pub mod report;
pub mod run;
pub mod svg;
pub mod table;

use std::fmt;

pub use run::{run, Command, Outputs};

/// Failure with its process exit code: 2 for bad input, 3 for numerical trouble.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError {
            kind: "validation".into(),
            message: msg.into(),
            code: 2,
        }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError {
            kind: "io".into(),
            message: msg.into(),
            code: 2,
        }
    }

    /// One-line JSON for standard error.
    pub fn json_line(&self) -> String {
        serde_json::json!({
            "error": self.kind,
            "message": self.message,
            "exit": self.code,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<spiralarc::Error> for CliError {
    fn from(e: spiralarc::Error) -> Self {
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
            code: if e.is_numerical() { 3 } else { 2 },
        }
    }
}
