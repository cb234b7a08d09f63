use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter violated its domain (non-positive mass, occupation
    /// outside `[0, 1]`, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Operator or state dimensions do not match the workspace.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A state failed its norm/trace/positivity validation.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The spatial kernel Gram matrix on the requested site set is not
    /// positive semidefinite; carries the offending eigenvalue.
    #[error("spatial kernel Gram matrix is not PSD: min eigenvalue {min_eigenvalue:e}")]
    KernelNotPsd { min_eigenvalue: f64 },

    /// A scan/table grid was empty or malformed.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// Reject non-finite or non-positive values (NaN included).
pub(crate) fn require_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::param(format!("{name} must be strictly positive, got {v}")));
    }
    Ok(())
}

/// Reject non-finite or negative values (NaN included).
pub(crate) fn require_nonnegative(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::param(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}
