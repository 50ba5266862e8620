use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
    #[error("pole encountered: {0}")]
    Pole(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
