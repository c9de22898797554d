use std::path::PathBuf;

use thiserror::Error;

use crate::quantum::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is outside its allowed range.
    #[error("invalid configuration for `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitIndex { index: usize, n_qubits: usize },

    /// The state norm drifted; this is a bug, not a user error.
    #[error("internal invariant violated: state norm is {norm} (expected 1)")]
    Normalization { norm: f64 },

    #[error("protocol ordering error: expected round {expected}, got round {got}")]
    RoundMismatch { expected: u64, got: u64 },

    #[error("protocol error: verifier requested {requested} basis but evidence is in {got} basis")]
    BasisMismatch { requested: Basis, got: Basis },

    #[error("malformed evidence for round {round}: {message}")]
    MalformedEvidence { round: u64, message: String },

    #[error("decay fit unavailable: need at least 3 rows with nonzero fsr, found {nonzero_rows}")]
    FitUnavailable { nonzero_rows: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Error::Config {
            field,
            message: message.into(),
        }
    }

    /// True for errors caused by user-supplied configuration.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}
