use std::path::PathBuf;

use gsp_sampling::GspError;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: GspError,
    },

    #[error(transparent)]
    Gsp(#[from] GspError),

    /// The pipeline ran but missed its tolerance.
    #[error("reconstruction error {error:e} exceeds tolerance {tol:e}")]
    Tolerance { error: f64, tol: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_IO,
            CliError::Tolerance { .. } => EXIT_MATH,
            CliError::Gsp(e) => match e {
                GspError::NotSquare(..)
                | GspError::InvalidFamily(_)
                | GspError::InvalidPermutation(_)
                | GspError::LengthMismatch { .. }
                | GspError::DomainMismatch { .. }
                | GspError::InvalidBand(_)
                | GspError::InvalidSamplingSet(_)
                | GspError::NotSubsampled { .. } => EXIT_USAGE,
                GspError::Format(_) | GspError::Json(_) => EXIT_IO,
                _ => EXIT_MATH,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
