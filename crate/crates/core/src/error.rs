use thiserror::Error;

/// Errors raised across the crate.
///
/// Positions (`k`, `index`) are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={n}")]
    Range { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("principal-minor expansion of size {n} exceeds cap {cap}; use det(1 + A) directly")]
    Capacity { n: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("-1 in spectrum: |det(1 + g)| = {0:e}")]
    Domain(f64),

    #[error("non-generic at k = {k}: |minor| = {magnitude:e}")]
    NonGeneric { k: usize, magnitude: f64 },

    #[error("square-root branch is ambiguous at diagonal position {position}")]
    BranchAmbiguity { position: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
