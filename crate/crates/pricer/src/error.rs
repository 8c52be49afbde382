use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PricerError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] csa_core::Error),
    #[error("cannot write report: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, PricerError>;

impl PricerError {
    pub fn parse(path: impl Into<PathBuf>, message: impl std::fmt::Display) -> Self {
        PricerError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// 3 for numerical failures, 2 for anything wrong with the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            PricerError::Model(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}
