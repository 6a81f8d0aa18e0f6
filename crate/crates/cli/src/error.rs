use thiserror::Error;

/// Failure of one CLI invocation.
#[derive(Debug, Error)]
pub enum CliError {
    /// Arguments or scenario file could not be parsed.
    #[error("{0}")]
    Config(String),
    /// A computation rejected its inputs or failed to converge.
    #[error(transparent)]
    Compute(#[from] gravnano::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Compute(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }
}
