use thiserror::Error;

use crate::copula::CopulaFamily;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameter outside the family's domain, or an operation the family
    /// does not support (generator of a fundamental copula, density of C⁺).
    #[error("theta out of domain for {family}: {theta} ({reason})")]
    Domain {
        family: CopulaFamily,
        theta: f64,
        reason: &'static str,
    },

    #[error("usage error: {0}")]
    Usage(String),

    /// A quantity with a zero denominator (regular graphs, empty graphs, ...).
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("graph too small: motif needs {needed} nodes, graph has {n}")]
    Size { needed: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }
}
