//! Library half of the `photon-detect` command line tool: config parsing,
//! experiment dispatch, and CSV output.

// validation guards are written `!(x > 0.0)` so NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;
pub mod table;

use std::fmt;

/// CLI-level error with a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad config file, schema violation, or out-of-range physics value.
    Config(String),
    /// Numeric validity or convergence failure in the pipeline.
    Numeric(String),
    /// Filesystem failure.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<photon_detect_core::Error> for CliError {
    fn from(err: photon_detect_core::Error) -> Self {
        use photon_detect_core::Error as E;
        match err {
            E::Numeric(_) | E::ImpossibleOutcome { .. } => CliError::Numeric(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
