use thiserror::Error;

/// Failures of a command, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: invalid input at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] entropic_core::Error),
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(entropic_core::Error::EnumerationCapExceeded { .. }) => EXIT_CAP,
            CliError::Core(entropic_core::Error::QuadratureNonConvergence { .. }) => EXIT_NONCONVERGENCE,
            _ => EXIT_VALIDATION,
        }
    }
}
