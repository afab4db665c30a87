use std::path::PathBuf;

/// Failures of the command-line front end, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mqdimer_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed histogram: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for anything wrong with the inputs, 3 for filesystem failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Io { .. } => 3,
            _ => 2,
        }
    }
}
