use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Consistency` and `Verification` are the serious ones: they mean an exact
/// identity that must hold for correct code failed to hold, so the build (or
/// an input table) is wrong, not the caller.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A resource guard refused the request (input too large for the
    /// exhaustive/brute-force code path).
    #[error("resource guard: {0}")]
    Guard(String),

    /// An internal exact identity failed; signals a transcription bug.
    #[error("internal consistency check `{check}` failed: {detail}")]
    Consistency { check: String, detail: String },

    /// A cross-module verification failed.
    #[error("verification `{check}` failed: {detail}")]
    Verification { check: String, detail: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }

    pub fn consistency(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Consistency {
            check: check.into(),
            detail: detail.into(),
        }
    }

    pub fn verification(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Verification {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
