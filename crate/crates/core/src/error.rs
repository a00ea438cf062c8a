use thiserror::Error;

/// Errors raised by the library. Failures that are data (a coupling
/// mismatch, a violated identity) are reported through return values
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("outside domain: {0}")]
    Domain(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
