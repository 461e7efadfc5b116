use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// Process exit status: 1 for configuration problems, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<regen_core::Error> for CliError {
    fn from(e: regen_core::Error) -> Self {
        match e {
            regen_core::Error::Config(_)
            | regen_core::Error::InvalidArgument(_)
            | regen_core::Error::Domain(_) => CliError::Config(e.to_string()),
            regen_core::Error::UndefinedTest(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("CSV error: {e}"))
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
