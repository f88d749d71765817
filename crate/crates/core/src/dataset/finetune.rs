use std::io::Write;

use serde::{Deserialize, Serialize};

use super::prompts::PromptInstance;
use crate::{Direction, Error, Result, Terminology};

#[derive(Serialize)]
struct Message<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct Example<'a> {
    messages: [Message<'a>; 2],
}

/// Writes one chat-format training example per prompt.
pub fn emit_finetune_file<W: Write>(prompts: &[PromptInstance], mut sink: W) -> Result<usize> {
    if prompts.is_empty() {
        return Err(Error::Domain("no prompts to write".into()));
    }
    for p in prompts {
        let ex = Example {
            messages: [
                Message { role: "user", content: &p.prompt_text },
                Message { role: "assistant", content: &p.expected_answer },
            ],
        };
        let mut line = serde_json::to_string(&ex)?;
        line.push('\n');
        sink.write_all(line.as_bytes()).map_err(|e| Error::io("writing fine-tuning file", e))?;
    }
    sink.flush().map_err(|e| Error::io("writing fine-tuning file", e))?;
    Ok(prompts.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub method: String,
    pub lora_rank: u32,
    pub lora_alpha: u32,
    pub lora_target_modules: String,
    pub learning_rate: f64,
    pub lr_scheduler: String,
    pub warmup_steps: u32,
    pub scheduler_cycles: f64,
    pub batch_size: u32,
    pub max_grad_norm: f64,
    pub weight_decay: f64,
    pub epochs: u32,
    pub train_on_inputs: String,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            method: "LoRA".into(),
            lora_rank: 64,
            lora_alpha: 128,
            lora_target_modules: "all-linear".into(),
            learning_rate: 1e-5,
            lr_scheduler: "cosine".into(),
            warmup_steps: 0,
            scheduler_cycles: 0.5,
            batch_size: 32,
            max_grad_norm: 1.0,
            weight_decay: 0.0,
            epochs: 20,
            train_on_inputs: "auto".into(),
        }
    }
}

/// Sidecar metadata for a fine-tuning file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinetuneManifest {
    pub terminology: Terminology,
    pub direction: Direction,
    pub seed: u64,
    pub generator: String,
    pub template_version: u32,
    pub pair_count: usize,
    pub prompt_count: usize,
    pub base_model: String,
    pub hyperparameters: Hyperparameters,
}
