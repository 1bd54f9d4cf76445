use thiserror::Error;

use crate::matrix::MAX_DIM;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid dimension {0}: expected 1 <= n <= {MAX_DIM}")]
    InvalidDimension(usize),

    #[error("expected {expected} entries for the given dimension, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, allowed {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid norm selector `{0}`; expected op | hs | trace | schatten:<p> | wnum")]
    InvalidNorm(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("invalid sampler spec `{0}`")]
    InvalidSampler(String),

    #[error("sampling failed: {0}")]
    SamplingFailed(String),

    #[error("malformed matrix input: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical kernels rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NotHermitian { .. } | Error::SamplingFailed(_)
        )
    }
}
