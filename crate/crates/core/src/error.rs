use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input parameters violate a model or operation precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A requested size exceeds what the operation can enumerate or store.
    #[error("size out of range: {0}")]
    Size(String),

    #[error("fixed-point iteration did not converge at z = {z} (eta = {eta:e}): residual {residual:e} after {iterations} iterations")]
    Convergence {
        z: Complex64,
        eta: f64,
        residual: f64,
        iterations: usize,
    },

    /// Evaluation requested exactly on a branch point of the resolvent.
    #[error("resolvent evaluated at branch point z = {0}; use a one-sided limit")]
    Edge(f64),

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}
