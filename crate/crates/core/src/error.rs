use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("objects live over different base dual quasi-bialgebras")]
    BaseMismatch,
    #[error("not invertible: {0}")]
    NotInvertible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
