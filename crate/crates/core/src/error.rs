use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("unknown label {0:?} (expected fake or real)")]
    UnknownLabel(String),

    #[error("unknown sentiment {0:?} (expected positive, negative or blank)")]
    UnknownSentiment(String),

    #[error("duplicate review id {0:?}")]
    DuplicateId(String),

    #[error("empty document")]
    EmptyDocument,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("constant input")]
    ConstantInput,

    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("diverged")]
    Diverged,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
