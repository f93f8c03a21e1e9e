use std::path::PathBuf;

use thiserror::Error;

/// Failures of the command-line front end, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input (exit code 2).
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    /// A flag value that does not parse (exit code 2).
    #[error("invalid value for {flag}: {message}")]
    Flag { flag: &'static str, message: String },
    /// Well-formed input the computation rejects (exit code 3).
    #[error("{0}")]
    Semantic(String),
    /// Failure writing an output file (exit code 1).
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Flag { .. } => 2,
            CliError::Semantic(_) => 3,
            CliError::Write { .. } => 1,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn write(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Write {
            path: path.into(),
            source,
        }
    }
}

impl From<skewjs_core::Error> for CliError {
    fn from(e: skewjs_core::Error) -> Self {
        CliError::Semantic(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
