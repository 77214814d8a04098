use thiserror::Error;

/// Errors reported by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A boundary or jump system could not be solved reliably.
    #[error("ill-conditioned linear system (condition estimate {condition:.3e}): {context}")]
    IllConditioned { condition: f64, context: String },

    /// A monotone root-find in lambda failed to bracket the target.
    #[error("no bracket for {what} within lambda in [{lo:.1e}, {hi:.1e}]")]
    OutOfRange { what: String, lo: f64, hi: f64 },

    #[error("internal numerical failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
