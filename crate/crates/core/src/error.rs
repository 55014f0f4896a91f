use thiserror::Error;

/// Errors shared by every module.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unsupported operands: {0}")]
    UnsupportedOperands(String),
    #[error("bad index: {0}")]
    IndexError(String),
    #[error("overlapping supports: {0}")]
    OverlappingSupports(String),
    #[error("outside domain: {0}")]
    DomainError(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
