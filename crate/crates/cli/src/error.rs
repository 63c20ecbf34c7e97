use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{origin}:{line}: {message}")]
    Parse { origin: String, line: usize, message: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("unknown graph source {0:?}")]
    UnknownSource(String),
    #[error("{origin}: {error}")]
    Json { origin: String, error: serde_json::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] crossnum_core::Error),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, error: std::io::Error) -> Self {
        LabError::Io { path: path.into(), error }
    }
}
