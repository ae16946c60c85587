use thiserror::Error;

use crate::reduction::ReductionTrace;

/// Errors raised by the library.
///
/// `Resource` and `NonTermination` carry whatever partial result was
/// available when the configured cap was hit.
#[derive(Debug, Error)]
pub enum CoxError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),

    #[error("resource cap exceeded: {message}")]
    Resource {
        message: String,
        partial: Option<PartialResult>,
    },

    #[error("procedure did not terminate within {cap} steps")]
    NonTermination { cap: usize, trace: Box<ReductionTrace> },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

/// Partial data attached to a resource error.
#[derive(Debug, Clone, PartialEq)]
pub enum PartialResult {
    /// Exponent vectors found before the search cap was reached.
    Vectors(Vec<Vec<i64>>),
    /// Last truncated value of a dimension computation and the cap it was taken at.
    Dimension { value: u64, cap: u64 },
}

pub type Result<T, E = CoxError> = std::result::Result<T, E>;

impl CoxError {
    pub fn param(msg: impl Into<String>) -> Self {
        CoxError::Parameter(msg.into())
    }
}
