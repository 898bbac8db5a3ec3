use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// `InvalidInput` covers malformed or precondition-violating data,
/// `InvariantViolation` is reserved for a mathematical identity that was
/// expected to hold and did not.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("enumeration bound exceeded: order {order} is above the bound {bound}; rerun with a bound of at least {order}")]
    BoundExceeded { order: u64, bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn violated<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvariantViolation(msg.into()))
}
