use thiserror::Error;

/// Every failure a public operation can report.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure did not reach its tolerance. Carries the best
    /// estimate and its error bound so callers can still inspect it.
    #[error("accuracy failure: {context} (estimate {estimate_re:e}{estimate_im:+e}i, error bound {error:e})")]
    Accuracy {
        context: String,
        estimate_re: f64,
        estimate_im: f64,
        error: f64,
    },
    /// API misuse (mismatched models, unacknowledged degenerate support, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed or inconsistent input data (files, configs).
    #[error("input error: {0}")]
    Input(String),
    /// A division by a numerically tiny quantity was requested.
    #[error("conditioning error: {0}")]
    Conditioning(String),
    /// A truncated expansion cannot meet the requested tolerance.
    #[error("truncation error: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn accuracy(context: impl Into<String>, estimate: num_complex::Complex64, error: f64) -> Self {
        Error::Accuracy {
            context: context.into(),
            estimate_re: estimate.re,
            estimate_im: estimate.im,
            error,
        }
    }
}
