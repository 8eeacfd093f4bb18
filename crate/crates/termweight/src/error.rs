use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by corpus loading, statistics, weighting and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("unknown term: {0:?}")]
    UnknownTerm(String),

    #[error("class index {index} out of range ({count} classes)")]
    ClassIndex { index: usize, count: usize },

    #[error("unknown scheme name: {0:?}")]
    UnknownScheme(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cell (scheme={scheme}, features={feature_size}, classifier={classifier}, fold={fold}): {source}")]
    Cell {
        scheme: String,
        feature_size: usize,
        classifier: String,
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
