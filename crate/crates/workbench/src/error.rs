use std::path::{Path, PathBuf};

use eit_core::fit::FitError;
use eit_core::lambda::LambdaError;
use eit_core::polariton::PolaritonError;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}{}: {message}", path.display(), row.map(|r| format!(" row {r}")).unwrap_or_default())]
    Format {
        path: PathBuf,
        row: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Polariton(#[from] PolaritonError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("no converged EIT fit in {}", .0.display())]
    MissingFit(PathBuf),
    #[error("manifest {} lists no spectra", .0.display())]
    EmptyManifest(PathBuf),
    #[error("{0}")]
    Usage(String),
}

impl WorkbenchError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
