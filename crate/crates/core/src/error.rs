use thiserror::Error;

#[derive(Debug, Error)]
pub enum FdError {
    /// A point, parameter or table is outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// An expression could not be evaluated (unbound variable, sqrt of a
    /// negative number, division by zero, no matching piece, ...).
    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("parse error at column {column}: {message}")]
    Expression { column: usize, message: String },

    #[error("config error (line {line}): {message}")]
    Config { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = FdError> = std::result::Result<T, E>;

impl FdError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        FdError::Domain(msg.into())
    }

    pub(crate) fn eval(msg: impl Into<String>) -> Self {
        FdError::Evaluation(msg.into())
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        FdError::Config {
            line,
            message: msg.into(),
        }
    }
}
