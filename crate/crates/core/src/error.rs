use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or series did not reach the requested accuracy. The best
    /// available estimate is carried in log scale.
    #[error("accuracy error: {message} (best ln-estimate {ln_estimate:.6e}, relative error {rel_err:.3e})")]
    Accuracy {
        message: String,
        ln_estimate: f64,
        rel_err: f64,
    },

    /// The derived density is not integrable on [0,1).
    #[error("not a weight: {0}")]
    NotAWeight(String),

    /// Malformed weight specification or other user input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
