use thiserror::Error;

/// Errors raised by the fractal calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("value {0} is outside the staircase range")]
    OutOfRange(f64),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unrecognized transform shape: {0}")]
    Unrecognized(String),

    #[error("division by a structurally zero denominator")]
    ZeroDenominator,

    #[error("outside validity region: {0}")]
    OutsideValidity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
