//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by distribution constructors, quadrature, series
/// evaluation and the measure computations built on top of them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on the inputs is violated (invalid parameter,
    /// exponent pair outside the finiteness domain, stencil leaving the
    /// domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation budget was exhausted before the requested tolerance
    /// was met. Carries the best estimate obtained so far.
    #[error("accuracy error in {what}: best estimate {best:e} with error estimate {err_est:e}")]
    Accuracy {
        what: String,
        best: f64,
        err_est: f64,
    },

    /// The integral or series grows without bound under refinement.
    #[error("divergence detected: {0}")]
    Divergent(String),

    /// Textual input (a distribution string, config file, or sample
    /// file) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
