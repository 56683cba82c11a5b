use thiserror::Error;

/// Failure to read a number from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number '{input}': {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseScalarError {
    pub fn new(input: &str, reason: &'static str) -> Self {
        Self {
            input: input.to_owned(),
            reason,
        }
    }
}

/// Errors raised by the library. Values are carried in their text form so
/// the type does not depend on the arithmetic mode.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the origin is not a valid point here")]
    ZeroPoint,
    #[error("direction must be a nonzero point")]
    ZeroDirection,
    #[error("coordinates or masses must be finite")]
    NonFinite,
    #[error("points are not antipodal through the origin")]
    NotAntipodal,
    #[error("triangle does not contain the origin")]
    NotContaining,
    #[error("expected a {expected} component")]
    WrongComponentKind { expected: &'static str },
    #[error("atom {index} has negative mass {mass}")]
    NegativeMass { index: usize, mass: String },
    #[error("total mass is {total}, deficit {deficit}")]
    TotalMassNotOne { total: String, deficit: String },
    #[error("distribution has nonzero mean ({x}, {y})")]
    NonZeroMean { x: String, y: String },
    #[error("support is not contained in a line through the origin")]
    NotOnLine,
    #[error("boundary factorizations disagree along ({direction}): {left} vs {right}")]
    FactorizationMismatch {
        direction: String,
        left: String,
        right: String,
    },
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
