use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dense kernel failed to converge (residual {residual:e})")]
    KernelFailure { residual: f64 },

    #[error("matrix is singular (sigma_min = {sigma_min:e})")]
    Singular { sigma_min: f64 },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("unsupported exponent p = {0}")]
    UnsupportedExponent(String),

    #[error("block dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exponent mismatch: p = {left} vs p = {right}")]
    ExponentMismatch { left: String, right: String },

    #[error("unsupported operator class: {0}")]
    UnsupportedClass(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("finite-section sequence is not stable: {0}")]
    NotStable(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("{path}: {message}")]
    Spec { path: String, message: String },

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            message: message.into(),
        }
    }
}
