use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller passed a value outside an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The argument is valid but outside the supported accuracy domain.
    #[error("outside supported domain: {0}")]
    Domain(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    /// Two independent evaluation routes disagreed.
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
