use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column `{0}` in header")]
    MissingColumn(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("no coordinates")]
    NoCoordinates,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid windows: {0}")]
    InvalidWindows(String),

    #[error("zero-speed edge; clean or use unweighted mode")]
    ZeroSpeedEdge,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
