use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode mismatch: cannot combine {left} and {right} series")]
    ModeMismatch {
        left: crate::Mode,
        right: crate::Mode,
    },
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("series is not normalized: expected c0 = 0 and c1 = 1")]
    NotNormalized,
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("lambda must lie in (0, 1], got {0}")]
    LambdaOutOfRange(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("evaluation point is a zero of f")]
    ZeroOfFunction,
    #[error("value is not finite")]
    NonFinite,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Stable short code used as a machine-parseable diagnostic prefix.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ModeMismatch { .. } => "mode-mismatch",
            Error::ZeroConstantTerm => "zero-constant-term",
            Error::NonzeroInnerConstant => "nonzero-inner-constant",
            Error::NotNormalized => "not-normalized",
            Error::OrderTooSmall { .. } => "order",
            Error::LambdaOutOfRange(_) => "lambda-range",
            Error::OutOfRange(_) => "range",
            Error::ZeroOfFunction => "zero-of-function",
            Error::NonFinite => "non-finite",
            Error::Parse(_) => "parse",
            Error::Config(_) => "config",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
