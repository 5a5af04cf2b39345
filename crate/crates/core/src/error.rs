use thiserror::Error;

/// Errors raised by graph construction, spectral analysis, sampling and reconstruction.
#[derive(Debug, Error)]
pub enum GspError {
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("shift is not diagonalizable (eigenvector condition number {condition:e})")]
    NotDiagonalizable { condition: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigensolver(String),

    #[error("filter domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: &'static str, found: &'static str },

    #[error("eigenvalues are not distinct (smallest gap {min_gap:e} <= tolerance {tol:e}); the Vandermonde system is singular")]
    RepeatedEigenvalues { min_gap: f64, tol: f64 },

    #[error("invalid band: {0}")]
    InvalidBand(String),

    #[error("invalid sampling set: {0}")]
    InvalidSamplingSet(String),

    #[error("band is degenerate: out-of-band rows have rank {rank}, need {needed}")]
    DegenerateBand { rank: usize, needed: usize },

    #[error("no perfect reconstruction: {0}")]
    NoPerfectReconstruction(String),

    #[error("signal is not subsampled: vertex {index} outside the sampling set holds {value:e}")]
    NotSubsampled { index: usize, value: f64 },

    #[error("{n} is not divisible by {k}")]
    NotDivisible { n: usize, k: usize },

    #[error("strategy {strategy} is infeasible: {reason}")]
    StrategyInfeasible { strategy: &'static str, reason: String },

    #[error("vertex and spectral reconstruction paths disagree by {max_diff:e}")]
    PathDisagreement { max_diff: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GspError>;
