use std::path::PathBuf;

use crate::generate::GenerateError;
use crate::ingest::IngestError;
use crate::report::ReportError;

/// Command failures, each mapped to a stable process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Bad flags, config or generator spec. Exit 1.
    #[error("usage: {0}")]
    Usage(String),

    /// Input rejected by validation. Exit 2.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The analysis produced nothing to report. Exit 2.
    #[error("empty result: {0}")]
    EmptyReport(String),

    /// Exit 3.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Invalid(_) | AppError::EmptyReport(_) => 2,
            AppError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    pub(crate) fn from_ingest(path: &std::path::Path, err: IngestError) -> Self {
        match err {
            IngestError::Io(source) => AppError::io(path, source),
            other => AppError::Invalid(format!("{}: {other}", path.display())),
        }
    }
}

impl From<ReportError> for AppError {
    fn from(err: ReportError) -> Self {
        match err {
            ReportError::EmptyReport(what) => AppError::EmptyReport(what.into()),
            ReportError::Io { path, source } => AppError::Io { path, source },
            ReportError::Malformed(msg) => AppError::Invalid(msg),
        }
    }
}

impl From<GenerateError> for AppError {
    fn from(err: GenerateError) -> Self {
        AppError::Usage(err.to_string())
    }
}
