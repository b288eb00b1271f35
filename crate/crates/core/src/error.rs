//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Ambient dimension outside the supported range 1..=3.
    #[error("unsupported ambient dimension {0} (supported: 1, 2, 3)")]
    UnsupportedDimension(usize),

    /// An operation that requires tangent data was called on a sample
    /// without it. Never silently estimated.
    #[error("missing tangent cone at sample index {0}")]
    MissingTangent(usize),

    /// A certificate check failed; the detail names the witness.
    #[error("certification failed [{check}]: {detail}")]
    Certification { check: String, detail: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn certification(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Certification {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
