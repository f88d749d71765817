//! Benchmark harness for biomedical term ↔ identifier normalization.
//!
//! The pipeline parses terminologies into [`TermRecord`]s, ranks identifiers
//! by literature popularity, draws frequency-stratified training pairs,
//! renders bidirectional prompts, scores completion endpoints with exact
//! match, classifies baseline → fine-tuned transitions and analyses
//! term/identifier embedding alignment.

pub mod dataset;
pub mod eval;
pub mod http;
pub mod ingest;
pub mod jsonl;
pub mod lexical;
pub mod outcome;
pub mod popularity;
pub mod terminology;

mod error;

pub use error::{Error, Result};
pub use ingest::{TermIndex, TermRecord};
pub use terminology::{Direction, Terminology};
