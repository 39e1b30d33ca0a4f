//! Error types shared across the crate.
//!
//! Parameter validation is strict-fail: out-of-range or degenerate family
//! parameters abort with a typed error instead of producing silently wrong
//! polynomials.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A family-parameter invariant was violated (message names the invariant).
    InvalidParameter(String),
    /// Two series/operator operands had incompatible shapes.
    ShapeMismatch(String),
    /// Division by an exactly zero rational.
    DivisionByZero,
    /// `seriesPow` requires the base to have constant term exactly 1.
    NonUnitConstantTerm,
    /// Second-kind denominators n_j + beta_j - n_i - beta_i vanished.
    DegenerateParameters(String),
    /// Truncation cutoff below the tail-domination threshold.
    CutoffBelowThreshold { required: usize, got: usize },
    /// The weight vector t is outside the admissible region.
    NonAdmissible(String),
    /// A probe could not certify convergence within its depth budget.
    Inconclusive(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NonUnitConstantTerm => {
                write!(f, "series power requires constant term exactly 1")
            }
            Error::DegenerateParameters(msg) => write!(f, "degenerate parameters: {msg}"),
            Error::CutoffBelowThreshold { required, got } => write!(
                f,
                "cutoff K={got} is below the tail-domination threshold K0={required}"
            ),
            Error::NonAdmissible(msg) => write!(f, "non-admissible weight vector: {msg}"),
            Error::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
