use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("I/O error: {context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("transport error (permanent): {0}")]
    PermanentTransport(String),
    #[error("transport error (transient, retries exhausted): {0}")]
    TransientTransport(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Stats(#[from] termbench_stats::StatsError),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }

    /// True for failures of the environment (files, network) rather than of
    /// the data or its preconditions.
    pub fn is_environmental(&self) -> bool {
        matches!(
            self,
            Error::Io { .. } | Error::PermanentTransport(_) | Error::TransientTransport(_) | Error::Protocol(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
