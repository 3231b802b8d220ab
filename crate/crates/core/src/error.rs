use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the scan pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("malformed filtration: {0}")]
    Structure(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    Input {
        path: String,
        line: u64,
        message: String,
    },

    #[error("misaligned input: {0}")]
    Alignment(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by user-supplied input or flags rather than a bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input { .. }
                | Error::Config(_)
                | Error::Alignment(_)
                | Error::Io { .. }
                | Error::Csv(_)
                | Error::DimensionMismatch { .. }
                | Error::EmptyCloud
                | Error::Domain(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
