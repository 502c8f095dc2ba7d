use thiserror::Error;

/// Errors produced by the evaluation engine and its I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or unparsable configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input data failed validation before any computation started.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown atom `{name}` (available: {})", available.join(", "))]
    NotFound { name: String, available: Vec<String> },

    /// Adaptive integration or summation did not reach the requested tolerance.
    #[error("no convergence: best estimate {best:e}, achieved relative error {achieved_rel:e}")]
    NonConvergence { best: f64, achieved_rel: f64 },

    /// The optimizer failed; `trace` holds the last iterates.
    #[error("fit did not converge: {reason}")]
    FitFailed { reason: String, trace: Vec<(f64, f64)> },

    /// An evaluation inside a sweep failed at grid index `index`.
    #[error("sweep point {index}: {source}")]
    Sweep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonConvergence { .. } | Error::FitFailed { .. } => true,
            Error::Sweep { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
