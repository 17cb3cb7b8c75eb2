use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A normalizing weight sum is not strictly positive.
    #[error("non-positive denominator in query `{query}` ({location}): {value}")]
    NonPositiveDenominator {
        query: String,
        location: String,
        value: f64,
    },

    #[error("query `{query}` has {nodes} nodes, above the dense solver cap of {cap}")]
    OverDenseCap {
        query: String,
        nodes: usize,
        cap: usize,
    },

    #[error("node {node} of query `{query}` is dangling and has no transition row")]
    DanglingNode { query: String, node: usize },

    #[error("invalid graph `{query}`: {reason}")]
    InvalidGraph { query: String, reason: String },

    #[error("infeasible ball: {0}")]
    InfeasibleBall(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("singular linear system while solving for query `{0}`")]
    Singular(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input data rather than a runtime failure.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidGraph { .. }
                | Error::Parse { .. }
                | Error::Json(_)
                | Error::DimensionMismatch { .. }
                | Error::InfeasibleBall(_)
        )
    }
}
