use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {id} is outside the ground set of size {ground_size}")]
    InvalidElement { id: usize, ground_size: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} needs {required} but the configured cap is {cap}")]
    Size {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("unknown algorithm label `{0}`")]
    UnknownAlgorithm(String),

    #[error("opt mode `known` requested but no optimum is available: {0}")]
    MissingOpt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
