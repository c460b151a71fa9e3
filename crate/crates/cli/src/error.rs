use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Core(#[from] sigma_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("certificate: {0}")]
    Certificate(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, column, message: message.into() }
    }

    /// Exit code 1 for character violations, 3 for every other input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(sigma_core::Error::InvalidCharacter { .. }) => 1,
            _ => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
