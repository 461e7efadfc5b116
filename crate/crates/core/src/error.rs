use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value outside domain: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A statistical test whose statistic is not defined for the given data.
    #[error("undefined test: {0}")]
    UndefinedTest(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
