//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range, need 2 <= p < 2^31")]
    ModulusRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("algebra mismatch")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("morphism is not closed: {0}")]
    NotClosed(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not graded-central")]
    NotCentral,
    #[error("degree error: {0}")]
    Degree(String),
    #[error("minimality is undefined over this algebra: {0}")]
    NotLocal(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
