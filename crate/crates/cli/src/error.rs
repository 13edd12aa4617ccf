use std::path::PathBuf;

use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Parse, validation and I/O failures.
pub const EXIT_INVALID: i32 = 1;
/// Bad flags or inconsistent configuration.
pub const EXIT_USAGE: i32 = 2;
/// An operator or state would exceed the dimension cap.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed input with a location (`line 4, column 9`, `program[2].targets[0]`).
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error(transparent)]
    Core(qchiplet::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn invalid(location: impl Into<String>, message: impl ToString) -> Self {
        CliError::Invalid { location: location.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Core(qchiplet::Error::DimensionLimit { .. }) => EXIT_RESOURCE,
            CliError::Core(qchiplet::Error::Config(_)) => EXIT_USAGE,
            _ => EXIT_INVALID,
        }
    }
}

impl From<qchiplet::Error> for CliError {
    fn from(e: qchiplet::Error) -> Self {
        match e {
            qchiplet::Error::DimensionLimit { .. } => CliError::Resource(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
