use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] lienard_core::Error),
    #[error("unknown artifact: {0}")]
    UnknownArtifact(String),
}

impl CliError {
    /// 2 parse/config, 3 precondition, 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Config(_) | CliError::Io(_) | CliError::UnknownArtifact(_) => 2,
            CliError::Core(e) if e.is_precondition() => 3,
            CliError::Core(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
