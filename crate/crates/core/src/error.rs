use thiserror::Error;

/// Failure classes shared by every operation in the crate.
///
/// The CLI maps `Usage` and `Validation` to exit code 2 and `Capability` to 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller passed arguments that violate a precondition.
    #[error("usage error: {0}")]
    Usage(String),
    /// The request is well formed but exceeds a configured size or depth cap.
    #[error("capability error: {0}")]
    Capability(String),
    /// Input data failed a semantic check (e.g. a sign constraint).
    #[error("validation error: {0}")]
    Validation(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn capability<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capability(msg.into()))
}

impl Error {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Validation(_) => 2,
            Error::Capability(_) => 3,
            Error::Invariant(_) => 1,
        }
    }
}
