use thiserror::Error;

/// Errors raised by the calculus. Mathematical check failures are not errors;
/// they are carried by [`crate::report::Report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shapes do not line up: variable counts, ranks, arities, degrees.
    #[error("structural error: {0}")]
    Structural(String),

    /// A precondition of an operation does not hold (non-cocycle target,
    /// non-horizontal deformation, failed coupling condition, ...).
    #[error("contract violated: {0}")]
    Contract(String),

    /// Malformed textual input.
    #[error("parse error at {path}: {reason}")]
    Parse { path: String, reason: String },
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn parse(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
