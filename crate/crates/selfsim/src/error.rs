use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("range mismatch: {0}")]
    RangeMismatch(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("operation requires an explicit groupoid")]
    RequiresExplicit,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
