use thiserror::Error;

/// Exit codes: 0 ok, 2 usage, 3 theorem violation, 4 precondition failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Violation(String),
    #[error("{0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violation(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}
