//! Frequency-stratified sampling, train/validation splits, prompt expansion
//! and fine-tuning file emission.

mod bins;
mod finetune;
mod prompts;
mod rng;
mod split;

pub use bins::{sample_bins, stratify, FrequencyBin, DEFAULT_N_BINS, DEFAULT_PER_BIN};
pub use finetune::{emit_finetune_file, FinetuneManifest, Hyperparameters};
pub use prompts::{expand_prompts, pair_id, templates, PromptInstance, TemplateTable, TEMPLATE_COUNT};
pub use rng::{SampleRng, GENERATOR_NAME};
pub use split::{make_split, read_split, write_split, SampledPair, Split, ValidationCap};
