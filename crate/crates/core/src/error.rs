//! Shared error type for the whole library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point lies outside the domain required by a metric or weight.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed arguments (duplicate indices, length mismatches, bad constants).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A stated precondition does not hold for the given data.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An enumeration would exceed the configured work budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A constructed object failed its own verification.
    #[error("verification failed: {0}")]
    Verification(String),

    /// Numerical conditioning makes the requested computation untrustworthy.
    #[error("conditioning: {0}")]
    Conditioning(String),

    /// A file does not match the expected schema. `path` is a JSON pointer.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
