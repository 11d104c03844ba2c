use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: String, message: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("operator does not commute with symmetry: residual {residual:.3e} exceeds bound {bound:.3e}")]
    SymmetryMismatch { residual: f64, bound: f64 },

    #[error("numeric failure: {message}{}", provenance.as_deref().map(|p| format!(" (operator: {p})")).unwrap_or_default())]
    Numeric {
        message: String,
        provenance: Option<String>,
    },

    #[error("degenerate unperturbed spectrum: gap {gap:.3e} between levels {index} and {} is below {bound:.1e}", index + 1)]
    Degenerate { index: usize, gap: f64, bound: f64 },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("insufficient data: need at least {needed} levels, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("ensemble failed: {failed} of {total} realizations failed (ceiling is 1%)")]
    EnsembleFailure { failed: usize, total: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that indicate a bad experiment description rather than
    /// a failure while running it.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpace(_)
                | Error::InvalidParameter { .. }
                | Error::Resource(_)
                | Error::Json(_)
        )
    }
}
