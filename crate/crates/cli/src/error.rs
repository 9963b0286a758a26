use std::path::PathBuf;

use dbsvol_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Core(#[from] CoreError),
}

impl CliError {
    /// 0 success, 1 usage, 2 data validation, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Format { .. } => 2,
            CliError::Core(e) => match e {
                CoreError::NotPositiveDefinite
                | CoreError::UndefinedCorrelation
                | CoreError::NonFinite(_) => 3,
                CoreError::InvalidConfig(_) | CoreError::SearchBudgetExceeded { .. } => 1,
                _ => 2,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
