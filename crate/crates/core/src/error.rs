use thiserror::Error;

use crate::algebra::Field;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    /// A precondition of an operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("entry {value} is not an element of {field}")]
    NotInField { field: Field, value: String },

    /// Gram-Schmidt met a vector whose residual fell under the rank threshold.
    #[error("degenerate input: residual norm {residual:e} at vector {index}")]
    Degenerate { index: usize, residual: f64 },

    #[error("numerical rank {found} does not match expected rank {expected}")]
    RankMismatch { expected: usize, found: usize },

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("base point is not critical (gradient norm {0:e})")]
    NotCritical(f64),

    #[error("gradient norm {grad_norm:e} is below tolerance but no critical class matches")]
    ClassificationFailure { grad_norm: f64 },

    #[error("integer overflow in polynomial arithmetic")]
    Overflow,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
