//! Completion providers, answer normalization and exact-match scoring.

mod normalize;
mod provider;
mod run;
mod transcript;

pub use normalize::{normalize_answer, score_item, NormalizeMode};
pub use provider::{
    CompletionProvider, DecodingParams, Exchange, HttpCompletionProvider, ReplayProvider, DEFAULT_MAX_TOKENS,
};
pub use run::{run_eval, EvalConfig, EvalItem, EvalRun, Phase, Scoring};
pub use transcript::{prompt_hash, read_transcript, write_transcript, TranscriptEntry};
