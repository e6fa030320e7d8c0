//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// Constructor or argument validation failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Mathematical domain violation (non-finite input, off-shell level, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or series failed to reach the requested tolerance.
    /// Carries the best estimate and its error bound.
    #[error("{context}: failed to converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Convergence {
        estimate: f64,
        error_bound: f64,
        context: String,
    },

    /// Discretization too coarse, detected by step-halving disagreement.
    #[error("{context}: accuracy check failed (measured {measured:e} > tolerance {tolerance:e})")]
    Accuracy {
        measured: f64,
        tolerance: f64,
        context: String,
    },

    /// Sequence lengths do not match the time grid.
    #[error("grid mismatch: expected {expected} samples, found {found}")]
    GridMismatch { expected: usize, found: usize },

    /// Inconsistent caller-supplied data (e.g. non-Hermitian correlation).
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
