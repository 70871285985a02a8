use thiserror::Error;

/// Errors produced by the numerical and stochastic kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to reach the requested accuracy.
    /// Carries the best available estimate so callers can degrade gracefully.
    #[error("accuracy error: {message} (best estimate {best_estimate:.6e}, error {error_estimate:.3e})")]
    Accuracy {
        message: String,
        best_estimate: f64,
        error_estimate: f64,
    },

    /// A time grid extends past the simulated operational horizon.
    #[error("horizon error: requested time {requested} exceeds available operational horizon {available}")]
    Horizon { requested: f64, available: f64 },

    /// Request would exceed a hard resource bound (memory or cubic-cost guard).
    #[error("resource error: {0}")]
    Resource(String),

    /// Unrecoverable floating-point failure (NaN propagation, failed factorization).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Malformed configuration or serialized input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// The best estimate held inside an accuracy error, if any.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            Error::Accuracy { best_estimate, .. } => Some(*best_estimate),
            _ => None,
        }
    }
}
