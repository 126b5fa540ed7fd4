use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid or rank mismatch between operands.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Invalid static configuration (grid, truncation radius, file keys, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Invalid runtime parameter (norm exponent, nonpositive input, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Requested check does not apply to the given system.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Simulation produced non-finite values or exceeded the norm ceiling.
    #[error("blow-up signal at t={t}: {reason}")]
    Blowup { t: f64, reason: String },

    /// A report could not be assembled from the given inputs.
    #[error("report error: {0}")]
    Report(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
