//! Error types shared across the crate.

use crate::series::SeriesValue;
use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by evaluators, operators, and checkers.
#[derive(Debug, Clone, Error)]
pub enum EvalError {
    /// The gamma function (or a Pochhammer ratio through it) was requested at
    /// a non-positive integer, within the pole tolerance.
    #[error("gamma pole at non-positive integer near {0}")]
    Pole(Complex64),

    /// A computed magnitude left the representable floating-point range.
    /// Signals the divergent regime rather than returning garbage.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The series engine detected sustained growth of the anti-diagonal sums.
    /// Carries the partial accumulation for diagnostics.
    #[error("series divergence detected after {} terms", partial.terms_used)]
    Divergence {
        /// Partial result at the moment growth was detected.
        partial: SeriesValue,
    },

    /// Invalid summation or verification configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A shifted evaluation left the operand's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A positivity constraint of an integral representation does not hold.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// An identity checker was invoked outside its stated preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, EvalError>;
