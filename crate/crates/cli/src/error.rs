use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    TreeFile {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid n range {0:?}")]
    Range(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("check {check} supports n <= {cap}, requested n = {n}")]
    CheckCap { check: &'static str, n: usize, cap: usize },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] harmtree_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error("config file: {0}")]
    Config(#[from] toml::de::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}
