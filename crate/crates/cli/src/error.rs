use std::path::PathBuf;

use wiretap_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io { .. } | CliError::Input { .. } => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io { path, source } => CliError::Io { path, source },
            CoreError::MultiEdgeRetriesExhausted { .. } | CoreError::RankDeficient { .. } => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}
