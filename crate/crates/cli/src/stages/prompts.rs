use termbench_core::dataset::{
    emit_finetune_file, expand_prompts, read_split, templates, FinetuneManifest, Hyperparameters, PromptInstance,
    Split, GENERATOR_NAME,
};
use termbench_core::jsonl::write_jsonl;
use termbench_core::Direction;

use super::{open, pretty_json, render, StageContext};
use crate::error::CliError;

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let pairs = read_split(open(&ctx.layout.split())?)?;
    let hyper = Hyperparameters::default();
    let mut all: Vec<PromptInstance> = Vec::new();
    for t in ctx.cfg.inputs.terminologies() {
        let of_t: Vec<_> = pairs.iter().filter(|p| p.terminology == t).collect();
        for d in Direction::ALL {
            let expanded: Vec<PromptInstance> = of_t.iter().flat_map(|p| expand_prompts(p, d)).collect();
            let train_pairs: Vec<_> = of_t.iter().filter(|p| p.split == Split::Train).collect();
            let train: Vec<PromptInstance> = train_pairs.iter().flat_map(|p| expand_prompts(p, d)).collect();
            if !train.is_empty() {
                let bytes = render(|buf| emit_finetune_file(&train, buf).map(drop).map_err(Into::into))?;
                ctx.emit(&ctx.layout.finetune(t, d), &bytes)?;
                let manifest = FinetuneManifest {
                    terminology: t,
                    direction: d,
                    seed: ctx.cfg.run.seed,
                    generator: GENERATOR_NAME.to_string(),
                    template_version: templates().version,
                    pair_count: train_pairs.len(),
                    prompt_count: train.len(),
                    base_model: ctx.cfg.finetune.base_model.clone(),
                    hyperparameters: hyper.clone(),
                };
                ctx.emit(&ctx.layout.finetune_manifest(t, d), &pretty_json(&manifest)?)?;
            }
            all.extend(expanded);
        }
    }
    let bytes = render(|buf| write_jsonl(buf, &all).map(drop).map_err(Into::into))?;
    ctx.emit(&ctx.layout.prompts(), &bytes)?;
    ctx.manifest.hyperparameters = hyper;
    ctx.detail("prompts", all.len());
    Ok(())
}
