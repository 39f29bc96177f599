use thiserror::Error;

/// Errors produced by the invariant engines and their input parsers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("level mismatch: cannot combine values of root order {left} and {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("division by zero in the cyclotomic field")]
    DivisionByZero,

    #[error("invalid level r = {0}: need r >= 3")]
    InvalidLevel(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("move rejected: {0}")]
    MoveRejected(String),

    #[error("resource ceiling hit in {what}: estimated {estimate:.3e} visits exceeds ceiling {ceiling}")]
    ResourceLimit {
        what: &'static str,
        estimate: f64,
        ceiling: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
