//! Crate-wide error type.

/// Errors reported by parameter validation and numeric operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A model constraint was violated. Validation rejects instead of
    /// clamping so that sweep grids never silently drift.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// The stated block rate disagrees with the epoch constants.
    #[error("rate mismatch: lambda1 = {lambda1} but d0/tau0 = {expected}")]
    RateMismatch { lambda1: f64, expected: f64 },

    /// An argument is outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A ratio against a zero baseline was requested.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// The objective cannot be evaluated anywhere on the feasible set.
    #[error("infeasible objective: {0}")]
    InfeasibleObjective(String),
}

pub type Result<T> = std::result::Result<T, Error>;
