use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QcorrError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid state: {0}")]
    State(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("at grid point ({coords}): {source}")]
    Grid {
        coords: String,
        #[source]
        source: Box<QcorrError>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl QcorrError {
    pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Self {
        QcorrError::Domain {
            param,
            value,
            reason,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QcorrError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad invocation rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        match self {
            QcorrError::Usage(_) => true,
            QcorrError::Grid { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, QcorrError>;
