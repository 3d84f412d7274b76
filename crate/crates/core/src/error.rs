use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("distribution is not a valid stationary law: {0}")]
    NotStationary(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("both hypotheses assign zero probability to the observed sequence")]
    Undecidable,

    #[error("target error {target} not reached for any length up to {max_length}")]
    TargetNotReached { target: f64, max_length: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
