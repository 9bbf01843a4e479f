use thiserror::Error;

/// Failures of a harness command, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Verification(_) => 1,
            HarnessError::Config(_) => 2,
            HarnessError::Io(_) => 3,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        HarnessError::Config(message.into())
    }

    pub fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        HarnessError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<seqpred::Error> for HarnessError {
    fn from(e: seqpred::Error) -> Self {
        match e {
            seqpred::Error::Io(m) => HarnessError::Io(m),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}
