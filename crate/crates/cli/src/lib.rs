//! Command-line front end for the `keyregion` library: TOML model and
//! auxiliary-channel files, region evaluation, frontier tracing, the binary
//! example check and CSV output.

pub mod commands;
pub mod config;
pub mod format;

use keyregion::Error;
use std::fmt;

/// Errors surfaced by the command line, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input files or flags.
    Config(String),
    /// Files that are individually valid but do not fit together, or an
    /// infeasible cost cap.
    Mismatch(String),
    /// A size guard would be exceeded.
    Guard(String),
    /// The analytic check failed or was refused.
    Verification(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Mismatch(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    /// Maps a library error raised while searching or evaluating.
    pub fn from_run(e: Error) -> Self {
        match e {
            Error::InfeasibleCost { .. } => CliError::Mismatch(e.to_string()),
            Error::SizeGuard { .. } => CliError::Guard(e.to_string()),
            Error::Refused(_) => CliError::Verification(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch: {m}"),
            CliError::Guard(m) => write!(f, "resource guard: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
