use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    /// A mathematical precondition does not hold (disconnected graph,
    /// isolated node under a normalized Laplacian, infeasible parameter).
    #[error("domain error: {0}")]
    Domain(String),

    /// A bounded search or sampling loop ran out of budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("no convergence after {iterations} iterations (last iterate {last:?})")]
    Convergence { iterations: usize, last: Vec<f64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
