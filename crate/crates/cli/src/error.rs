use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad descriptor, undeclared name or malformed scenario. Exit 2.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A task failed while running. Exit 1.
    #[error(transparent)]
    Core(#[from] radial_orlicz::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Core(radial_orlicz::Error::Parse(_)) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Descriptor-time failures are input errors regardless of their origin.
pub(crate) fn invalid<T>(r: radial_orlicz::Result<T>, what: &str) -> CliResult<T> {
    r.map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}
