use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("ratio {ratio} is {found}; {operation} requires {expected}")]
    Regime {
        ratio: String,
        found: String,
        expected: String,
        operation: String,
    },

    #[error("outside the validity range: {0}")]
    Validity(String),

    #[error("root search would test {0} candidates, above the limit")]
    SearchTooLarge(u128),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
