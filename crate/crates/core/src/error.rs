use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    /// A random draw landed in the bad locus; the caller may reseed.
    #[error("degenerate choice: {0}")]
    Degenerate(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
