use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("missing {path}; run the `{stage}` stage first")]
    MissingArtifact { path: PathBuf, stage: &'static str },
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error(transparent)]
    Core(#[from] termbench_core::Error),
    #[error(transparent)]
    Stats(#[from] termbench_stats::StatsError),
}

impl CliError {
    /// 1 for data, configuration and precondition failures; 2 for I/O and
    /// transport failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(..) => 2,
            CliError::Core(e) if e.is_environmental() => 2,
            _ => 1,
        }
    }
}

pub(crate) fn io(ctx: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let ctx = ctx.into();
    move |e| CliError::Io(ctx, e)
}
