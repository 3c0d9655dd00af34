use thiserror::Error;

/// Errors raised by the library.
///
/// `Input` covers every rejected argument (dimension mismatches, zero
/// vectors where they are forbidden, violated hypotheses). `InvariantBreach`
/// means a construction that is guaranteed to succeed did not; it always
/// points at a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn breach<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvariantBreach(msg.into()))
}
