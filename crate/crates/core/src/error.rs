use thiserror::Error;

/// Errors raised by the solver building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite {what} at the evaluation point")]
    NonFinite { what: &'static str },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
