use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
