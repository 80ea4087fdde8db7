//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration would exceed the configured subset cap.
    #[error("enumeration cap exceeded: {required} subsets needed, cap is {cap}")]
    EnumerationCap { required: String, cap: u64 },

    /// Rejection sampling exhausted its budget.
    #[error(
        "rejection budget exhausted after {attempts} attempts \
         (expected acceptance probability {expected_acceptance:.6e})"
    )]
    RejectionBudget {
        attempts: u64,
        expected_acceptance: f64,
    },

    /// Input violates a general-position requirement.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A matrix did not have the rank required by the construction.
    #[error("rank deficient: {0}")]
    RankDeficient(String),

    /// An iterative method failed to reach its tolerance.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// A cross-check between two independent computations disagreed.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
