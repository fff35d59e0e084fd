//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// An element identifier does not belong to the ambient poset.
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    /// An identifier in a formula is neither a bound variable nor a declared name.
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    /// An enumeration would exceed its cap.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    /// Text input failed to parse.
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A name was required to be hereditarily functional and is not.
    #[error("name is not functional: {0}")]
    NotFunctional(String),

    /// A construction violated a structural invariant.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A precondition on a semantic operation failed.
    #[error("semantic error: {0}")]
    Semantic(String),

    /// Underlying I/O failure.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
