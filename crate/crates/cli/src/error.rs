use galois_core::GaloisError;
use thiserror::Error;

/// Exit status for validation and usage errors.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status when `Bf = g` has no solution.
pub const EXIT_NO_SOLUTION: i32 = 3;
/// Exit status for a failed lab experiment or an internal fault.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error("{0}")]
    Galois(#[from] GaloisError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Galois(GaloisError::Internal(_)) => EXIT_FAILURE,
            CliError::Galois(GaloisError::NoSolution) => EXIT_NO_SOLUTION,
            _ => EXIT_VALIDATION,
        }
    }
}
