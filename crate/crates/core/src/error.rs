//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The involution is undefined on the grading generator.
    #[error("dagger is undefined for the grading generator d")]
    DaggerOfD,

    /// The Verma-module left action excludes d; depth plays its role there.
    #[error("the Verma module does not carry an action of d; use the depth grading")]
    VermaActionOfD,

    #[error("PBW comparison requires negative modes, got {0} and {1}")]
    PbwOrderNonNegative(String, String),

    #[error("PBW monomials admit only negative-mode generators, got {0}")]
    PbwLetterNonNegative(String),

    #[error("highest weight must be a nonnegative integer, got {0}")]
    NegativeHighestWeight(i64),

    #[error("invalid rational literal '{0}'")]
    InvalidRational(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weight space dimension {dim} exceeds the configured cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
}
