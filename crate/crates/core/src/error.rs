use thiserror::Error;

/// Errors raised by state construction and the numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Requested index or tail bound does not fit the truncation.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Argument outside the domain of the operation (e.g. |z| >= 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// The computation would lose too much accuracy to be trusted.
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    /// Boundary grid too coarse for the state bandwidth, or not a power of two.
    #[error("aliasing: grid size {grid} must be a power of two and at least {required}")]
    Aliasing { grid: usize, required: usize },

    /// A superposition or combination collapsed to (numerically) zero norm.
    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed JSON state spec or Weyl element string.
    #[error("invalid spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
