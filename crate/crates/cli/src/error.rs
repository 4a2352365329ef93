use std::path::PathBuf;

use saeame::algorithm::SaeameError;
use saeame::metrics::MetricsError;
use saeame::problems::ProblemError;
use thiserror::Error;

/// Errors surfaced by the benchmark harness.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error("bad record {path}: {message}")]
    Record { path: PathBuf, message: String },
    #[error("no result records found in {0}")]
    EmptyResults(PathBuf),
    #[error(transparent)]
    Algorithm(#[from] SaeameError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        HarnessError::Config(message.into())
    }
}
