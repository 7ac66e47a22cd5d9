use thiserror::Error;

/// Errors produced by the matrix primitives, the synthesis chain, the
/// trajectory machinery, the oracle and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is numerically singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("inner matrix R + B'PB is numerically singular")]
    SingularInnerMatrix,

    #[error("Riccati iteration did not converge within {max_iter} iterations (residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64 },

    #[error("converged Riccati solution does not stabilize the closed loop")]
    NotStabilizing,

    #[error("trajectory has no input sequence")]
    MissingInput,

    #[error("stacked system too large: {unknowns} unknowns exceeds the limit of {limit}")]
    TooLarge { unknowns: usize, limit: usize },

    #[error("invalid instance: {0}")]
    InstanceInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
