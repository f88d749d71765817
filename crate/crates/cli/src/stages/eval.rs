use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use termbench_core::dataset::PromptInstance;
use termbench_core::eval::{
    read_transcript, run_eval, write_transcript, CompletionProvider, DecodingParams, EvalConfig, EvalItem, EvalRun,
    HttpCompletionProvider, NormalizeMode, Phase, ReplayProvider, Scoring,
};
use termbench_core::http::{HttpTransport, ReqwestTransport};
use termbench_core::jsonl::{read_jsonl, write_jsonl};
use termbench_core::{Direction, Terminology};

use super::{open, pretty_json, render, StageContext};
use crate::config::{env_secret, COMPLETION_KEY_VAR};
use crate::error::CliError;
use crate::layout::RunLayout;

/// Everything about a run except its items, which live in the results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub model_id: String,
    pub terminology: Terminology,
    pub direction: Direction,
    pub phase: Phase,
    pub scoring: Scoring,
    pub mode: NormalizeMode,
    pub items: usize,
    pub pairs: usize,
    pub correct_pairs: usize,
    pub failed_items: usize,
    pub accuracy: f64,
}

pub fn load_run(layout: &RunLayout, p: Phase, t: Terminology, d: Direction) -> Result<EvalRun, CliError> {
    let summary: EvalSummary = serde_json::from_reader(open(&layout.eval_summary(p, t, d))?)
        .map_err(termbench_core::Error::from)?;
    let items: Vec<EvalItem> = read_jsonl(open(&layout.eval_results(p, t, d))?)?;
    Ok(EvalRun {
        model_id: summary.model_id,
        terminology: summary.terminology,
        direction: summary.direction,
        phase: summary.phase,
        scoring: summary.scoring,
        items,
        accuracy: summary.accuracy,
    })
}

fn provider(ctx: &StageContext<'_>, phase: Phase) -> Result<Box<dyn CompletionProvider>, CliError> {
    let eval = &ctx.cfg.eval;
    if let Some(path) = eval.transcript(phase) {
        let entries = read_transcript(open(path)?)?;
        log::info!("{}: replaying {} recorded exchanges from {}", phase.code(), entries.len(), path.display());
        return Ok(Box::new(ReplayProvider::new(entries)));
    }
    let endpoint = eval.endpoint.as_deref().ok_or_else(|| {
        CliError::Config(format!("eval.endpoint or eval.{}_transcript must be set", phase.code()))
    })?;
    let transport: Arc<dyn HttpTransport> = Arc::new(ReqwestTransport::new(Duration::from_secs(eval.timeout_secs))?);
    Ok(Box::new(HttpCompletionProvider::new(transport, endpoint, env_secret(COMPLETION_KEY_VAR))))
}

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let prompts: Vec<PromptInstance> = read_jsonl(open(&ctx.layout.prompts())?)?;
    let eval = &ctx.cfg.eval;
    let mode = if eval.extract_mode { NormalizeMode::Extract } else { NormalizeMode::Strict };
    let mut accuracies = serde_json::Map::new();
    for phase in [Phase::Baseline, Phase::FineTuned] {
        let provider = provider(ctx, phase)?;
        for t in ctx.cfg.inputs.terminologies() {
            let model = eval.model_for(phase, t).ok_or_else(|| {
                CliError::Config(format!("no {} model configured for {}", phase.code(), t.code()))
            })?;
            for d in Direction::ALL {
                let selected: Vec<PromptInstance> = prompts
                    .iter()
                    .filter(|p| p.direction == d && p.terminology().ok() == Some(t))
                    .cloned()
                    .collect();
                let config = EvalConfig {
                    model_id: model.to_string(),
                    phase,
                    params: DecodingParams { temperature: eval.temperature, max_tokens: eval.max_tokens },
                    mode,
                    all_templates: eval.all_templates,
                    concurrency: ctx.cfg.run.concurrency,
                };
                let (run, transcript) = ctx.runtime.block_on(run_eval(provider.as_ref(), &selected, &config))?;
                let per_pair = run.pair_correctness();
                let summary = EvalSummary {
                    model_id: run.model_id.clone(),
                    terminology: t,
                    direction: d,
                    phase,
                    scoring: run.scoring,
                    mode,
                    items: run.items.len(),
                    pairs: per_pair.len(),
                    correct_pairs: per_pair.values().filter(|&&c| c).count(),
                    failed_items: run.items.iter().filter(|i| i.error.is_some()).count(),
                    accuracy: run.accuracy,
                };
                let results = render(|buf| write_jsonl(buf, &run.items).map(drop).map_err(Into::into))?;
                ctx.emit(&ctx.layout.eval_results(phase, t, d), &results)?;
                ctx.emit(&ctx.layout.eval_summary(phase, t, d), &pretty_json(&summary)?)?;
                let tr = render(|buf| write_transcript(buf, &transcript).map(drop).map_err(Into::into))?;
                ctx.emit(&ctx.layout.eval_transcript(phase, t, d), &tr)?;
                accuracies.insert(format!("{}/{}/{}", phase.code(), t.code(), d.code()), run.accuracy.into());
            }
        }
    }
    ctx.detail("accuracy", accuracies);
    Ok(())
}
