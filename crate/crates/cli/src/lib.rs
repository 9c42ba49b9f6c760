//! File-driven front end for the workspace: parse a JSON process description,
//! validate it, assemble a full diagnostic report, or iterate the process
//! over generations.
//!
//! Exit-code contract: `0` success, `1` semantic failure (validation,
//! preconditions), `2` I/O or parse failure.

pub mod input;
pub mod report;
pub mod simulate;

use thiserror::Error;

/// Errors surfaced by the command-line tool.
#[derive(Debug, Error)]
pub enum CliError {
    /// The input file could not be read or an output could not be written.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// The input is not valid JSON for the process schema.
    #[error("parse error: {0}")]
    Parse(String),
    /// The input parsed but does not describe valid inputs, or a
    /// precondition of a command is violated.
    #[error("{0}")]
    Semantic(#[from] measure_core::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Semantic(_) => 1,
            CliError::Io(_) | CliError::Parse(_) => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}
