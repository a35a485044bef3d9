use thiserror::Error;

/// Errors produced by the algebra, design, and code-construction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring size mismatch: {left} vs {right}")]
    RingSizeMismatch { left: usize, right: usize },

    #[error("polynomial is not invertible in R_{n}")]
    NotInvertible { n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("support collision: expected weight {expected}, got {got}")]
    Collision { expected: usize, got: usize },

    #[error("no valid design found after {tries} tries")]
    Exhausted { tries: usize },

    #[error("last circulant block is singular")]
    LastBlockSingular,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
