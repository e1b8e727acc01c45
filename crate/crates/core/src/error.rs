use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("derivative order {order} of field {index} exceeds available order {max}")]
    DerivativeOrder { index: usize, order: usize, max: usize },

    #[error("non-finite state at substep {substep}, last finite value {last}")]
    Diverged { substep: usize, last: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("truncation shortfall: degree {needed} required, path truncated at {have}")]
    Truncation { needed: usize, have: usize },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
