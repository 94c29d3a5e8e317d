//! Error type shared by all spectral operations.

use thiserror::Error;

/// Errors produced by spectral assembly, eigensolves and series solvers.
#[derive(Debug, Clone, Error)]
pub enum SteklovError {
    /// An input parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A branch function was evaluated exactly at its pole.
    #[error("branch l = {l} has a pole at parameter {pole}: requested value {requested}")]
    PoleAt { l: u32, pole: f64, requested: f64 },

    /// The pair (lambda, mu) does not lie on the mode-l branch, so the
    /// 2x2 mode matrix has no nontrivial kernel.
    #[error("mode matrix is nonsingular (det = {det:.3e}); no eigenfunction at this parameter pair")]
    NotOnBranch { det: f64 },

    /// The quadratic form fails its positive-definiteness check.
    #[error("form is not coercive on this basis (smallest Ritz value {smallest:.6e}); raise the shift b or reduce the spectral parameter")]
    CoercivityFailure { smallest: f64 },

    /// The doubling search for the shift b exceeded its cap.
    #[error("shift search failed at b = {last_b:.3e}; the parameter exceeds the first constrained eigenvalue, use a deflated solve")]
    ShiftSearchFailed { last_b: f64 },

    /// The spectral parameter coincides with a constrained eigenvalue, where
    /// the deflated problem degenerates.
    #[error("parameter {value:.12e} coincides with constrained eigenvalue #{index} within tolerance; the deflated problem is degenerate here")]
    DegenerateParameter { value: f64, index: usize },

    /// A quantity required by the requested operation is missing.
    #[error("configuration error: {0}")]
    ConfigurationError(String),

    /// Boundary data fails the trace-space membership test.
    #[error("boundary datum is outside the trace space: weighted tail diverges (fitted decay {fitted_decay:.4}, need below {required_decay:.4})")]
    MembershipFailure {
        fitted_decay: f64,
        required_decay: f64,
    },

    /// Structured input violates a documented contract.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Malformed serialized input.
    #[error("parse error: {0}")]
    ParseError(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, SteklovError>;
