use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {failed} of {points} checks outside the tolerance {limit}")]
    Verification { failed: usize, points: usize, limit: f64 },
    #[error("{0}")]
    Horizon(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Json(_) => 1,
            CliError::Verification { .. } => 2,
            CliError::Horizon(_) => 3,
            // unreadable input or unwritable output is a usage problem too
            CliError::Io(_) => 1,
        }
    }
}

impl From<ini_core::Error> for CliError {
    fn from(e: ini_core::Error) -> Self {
        match e {
            ini_core::Error::HorizonExceeded { .. } | ini_core::Error::BoundaryHorizonExceeded { .. } => {
                CliError::Horizon(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
