use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter triple or range violates an operation's precondition.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("group element is not parabolic")]
    NotParabolic,

    #[error("matrix does not have determinant 1")]
    NotUnimodular,

    /// The transition matrix has no monomial determinant or the twisted
    /// section counts did not stabilize inside the degree window.
    #[error("invalid transition data: {0}")]
    InvalidTransition(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
