use serde_json::json;
use thiserror::Error;

use fpark_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{kind}: {message}")]
    Invalid { kind: &'static str, message: String },
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self::Invalid { kind: "invalid_config", message: message.into() }
    }

    pub fn invalid_size(message: impl Into<String>) -> Self {
        Self::Invalid { kind: "invalid_size", message: message.into() }
    }

    /// Process exit status.
    pub fn code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Invalid { .. } => 2,
            Self::Cap(_) => 3,
            Self::Verification(_) => 4,
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        let (kind, message) = match self {
            Self::Invalid { kind, message } => (*kind, message.clone()),
            Self::Cap(m) => ("cap_exceeded", m.clone()),
            Self::Verification(m) => ("verification_failed", m.clone()),
            Self::Io(m) => ("io", m.clone()),
        };
        json!({ "error": kind, "message": message, "exit_code": self.code() }).to_string()
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidSize(m) => Self::Invalid { kind: "invalid_size", message: m },
            CoreError::Index(m) | CoreError::Domain(m) => Self::invalid(m),
            CoreError::Resource(m) => Self::Cap(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}
