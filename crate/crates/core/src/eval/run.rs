use std::collections::BTreeMap;

use futures::stream::{self, StreamExt};
use serde::{Deserialize, Serialize};

use super::normalize::{normalize_answer, score_item, NormalizeMode};
use super::provider::{CompletionProvider, DecodingParams};
use super::transcript::TranscriptEntry;
use crate::dataset::PromptInstance;
use crate::{Direction, Error, Result, Terminology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Baseline,
    FineTuned,
}

impl Phase {
    pub const ALL: [Phase; 2] = [Phase::Baseline, Phase::FineTuned];

    pub fn code(self) -> &'static str {
        match self {
            Phase::Baseline => "baseline",
            Phase::FineTuned => "finetuned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scoring {
    /// Template 1 only; one item per pair.
    FirstTemplate,
    /// All five templates; a pair is correct when most of its items are.
    MajorityVote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub model_id: String,
    pub phase: Phase,
    pub params: DecodingParams,
    pub mode: NormalizeMode,
    pub all_templates: bool,
    pub concurrency: usize,
}

impl EvalConfig {
    pub fn new(model_id: impl Into<String>, phase: Phase) -> Self {
        Self {
            model_id: model_id.into(),
            phase,
            params: DecodingParams::default(),
            mode: NormalizeMode::Strict,
            all_templates: false,
            concurrency: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalItem {
    pub pair_id: String,
    pub direction: Direction,
    pub template_id: u8,
    pub raw_output: String,
    pub normalized_output: String,
    pub correct: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRun {
    pub model_id: String,
    pub terminology: Terminology,
    pub direction: Direction,
    pub phase: Phase,
    pub scoring: Scoring,
    pub items: Vec<EvalItem>,
    pub accuracy: f64,
}

impl EvalRun {
    /// Per-pair correctness under the run's scoring rule.
    pub fn pair_correctness(&self) -> BTreeMap<String, bool> {
        pair_correctness(&self.items, self.scoring)
    }
}

fn pair_correctness(items: &[EvalItem], scoring: Scoring) -> BTreeMap<String, bool> {
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for it in items {
        let t = tally.entry(it.pair_id.clone()).or_default();
        t.0 += usize::from(it.correct);
        t.1 += 1;
    }
    tally
        .into_iter()
        .map(|(id, (hits, n))| {
            let ok = match scoring {
                Scoring::FirstTemplate => hits == n,
                Scoring::MajorityVote => 2 * hits > n,
            };
            (id, ok)
        })
        .collect()
}

/// Evaluates `prompts` against `provider`. Items come back ordered by
/// `(pair_id, template_id)`, with the matching transcript entries in the
/// same order.
pub async fn run_eval(
    provider: &dyn CompletionProvider,
    prompts: &[PromptInstance],
    config: &EvalConfig,
) -> Result<(EvalRun, Vec<TranscriptEntry>)> {
    let selected: Vec<&PromptInstance> =
        prompts.iter().filter(|p| config.all_templates || p.template_id == 1).collect();
    let first = *selected
        .first()
        .ok_or_else(|| Error::Domain("no prompts to evaluate".into()))?;
    let terminology = first.terminology()?;
    let direction = first.direction;
    for p in &selected {
        if p.direction != direction || p.terminology()? != terminology {
            return Err(Error::Validation(format!(
                "prompt set mixes {}/{} with {}/{}",
                terminology,
                direction,
                p.terminology()?,
                p.direction
            )));
        }
    }

    let mut done: Vec<(EvalItem, Option<TranscriptEntry>)> = stream::iter(selected.iter().copied())
        .map(|p| async move {
            let ex = provider.complete(&p.prompt_text, &config.model_id, &config.params).await;
            let expected = normalize_answer(&p.expected_answer, terminology, direction, config.mode);
            let item = match ex.output {
                Ok(raw) => {
                    let normalized = normalize_answer(&raw, terminology, direction, config.mode);
                    let correct = score_item(&normalized, &expected, direction);
                    EvalItem {
                        pair_id: p.pair_id.clone(),
                        direction,
                        template_id: p.template_id,
                        raw_output: raw,
                        normalized_output: normalized,
                        correct,
                        error: None,
                    }
                }
                Err(msg) => EvalItem {
                    pair_id: p.pair_id.clone(),
                    direction,
                    template_id: p.template_id,
                    raw_output: String::new(),
                    normalized_output: String::new(),
                    correct: false,
                    error: Some(msg),
                },
            };
            (item, ex.entry)
        })
        .buffer_unordered(config.concurrency.max(1))
        .collect()
        .await;
    done.sort_by(|a, b| (&a.0.pair_id, a.0.template_id).cmp(&(&b.0.pair_id, b.0.template_id)));

    let failures = done.iter().filter(|(it, _)| it.error.is_some()).count();
    if failures == done.len() {
        let first_error = done[0].0.error.clone().unwrap_or_default();
        return Err(Error::TransientTransport(format!(
            "all {} completions failed for {terminology}/{direction} ({}); first error: {first_error}",
            done.len(),
            config.phase.code()
        )));
    }
    if failures > 0 {
        log::warn!("{failures} of {} completions failed for {terminology}/{direction}", done.len());
    }

    let (items, entries): (Vec<EvalItem>, Vec<Option<TranscriptEntry>>) = done.into_iter().unzip();
    let scoring = if config.all_templates { Scoring::MajorityVote } else { Scoring::FirstTemplate };
    let per_pair = pair_correctness(&items, scoring);
    let accuracy = per_pair.values().filter(|&&c| c).count() as f64 / per_pair.len() as f64;
    Ok((
        EvalRun {
            model_id: config.model_id.clone(),
            terminology,
            direction,
            phase: config.phase,
            scoring,
            items,
            accuracy,
        },
        entries.into_iter().flatten().collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{expand_prompts, SampledPair, Split};
    use crate::eval::provider::Exchange;
    use async_trait::async_trait;
    use std::collections::HashMap;

    struct Scripted {
        answers: HashMap<String, Result<String, String>>,
        delay_ms: HashMap<String, u64>,
    }

    #[async_trait]
    impl CompletionProvider for Scripted {
        async fn complete(&self, prompt_text: &str, _m: &str, _p: &DecodingParams) -> Exchange {
            if let Some(ms) = self.delay_ms.get(prompt_text) {
                tokio::time::sleep(std::time::Duration::from_millis(*ms)).await;
            }
            Exchange {
                output: self.answers.get(prompt_text).cloned().unwrap_or(Err("unknown".into())),
                entry: None,
            }
        }
    }

    fn prompts(n: usize, dir: Direction) -> Vec<PromptInstance> {
        (0..n)
            .flat_map(|i| {
                let pair = SampledPair {
                    terminology: Terminology::GoCc,
                    term: format!("term {i}"),
                    identifier: format!("GO:{:07}", i + 1),
                    bin_index: 0,
                    split: Split::Train,
                };
                expand_prompts(&pair, dir)
            })
            .collect()
    }

    fn answering(ps: &[PromptInstance], wrong: &[usize]) -> Scripted {
        let answers = ps
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let a = if wrong.contains(&(i / 5)) { "nope".to_string() } else { p.expected_answer.clone() };
                (p.prompt_text.clone(), Ok(a))
            })
            .collect();
        Scripted { answers, delay_ms: HashMap::new() }
    }

    #[tokio::test]
    async fn perfect_provider() {
        let ps = prompts(4, Direction::TermToId);
        let (run, _) = run_eval(&answering(&ps, &[]), &ps, &EvalConfig::new("m", Phase::Baseline)).await.unwrap();
        assert_eq!(run.items.len(), 4);
        assert_eq!(run.accuracy, 1.0);
    }

    #[tokio::test]
    async fn three_of_four() {
        let ps = prompts(4, Direction::IdToTerm);
        let (run, _) = run_eval(&answering(&ps, &[2]), &ps, &EvalConfig::new("m", Phase::Baseline)).await.unwrap();
        assert_eq!(run.accuracy, 0.75);
    }

    #[tokio::test]
    async fn failure_is_item_level() {
        let ps = prompts(4, Direction::TermToId);
        let mut prov = answering(&ps, &[]);
        prov.answers.insert(ps[5].prompt_text.clone(), Err("connection reset".into()));
        let (run, _) = run_eval(&prov, &ps, &EvalConfig::new("m", Phase::FineTuned)).await.unwrap();
        assert_eq!(run.accuracy, 0.75);
        let failed = &run.items[1];
        assert!(!failed.correct);
        assert_eq!(failed.error.as_deref(), Some("connection reset"));
    }

    #[tokio::test]
    async fn all_failed_is_run_error() {
        let ps = prompts(2, Direction::TermToId);
        let prov = Scripted { answers: HashMap::new(), delay_ms: HashMap::new() };
        assert!(run_eval(&prov, &ps, &EvalConfig::new("m", Phase::Baseline)).await.is_err());
    }

    #[tokio::test(start_paused = true)]
    async fn order_independent_of_completion() {
        let mut ps = prompts(6, Direction::TermToId);
        ps.reverse();
        let mut prov = answering(&ps, &[1]);
        for (i, p) in ps.iter().enumerate() {
            prov.delay_ms.insert(p.prompt_text.clone(), (i as u64 * 37) % 11);
        }
        let mut cfg = EvalConfig::new("m", Phase::Baseline);
        cfg.concurrency = 1;
        let (serial, _) = run_eval(&prov, &ps, &cfg).await.unwrap();
        cfg.concurrency = 8;
        let (parallel, _) = run_eval(&prov, &ps, &cfg).await.unwrap();
        assert_eq!(serial, parallel);
        let ids: Vec<&str> = serial.items.iter().map(|i| i.pair_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[tokio::test]
    async fn majority_vote() {
        let ps = prompts(2, Direction::TermToId);
        let mut prov = answering(&ps, &[]);
        // pair 0: 2 of 5 right, pair 1: 3 of 5 right
        for i in [0usize, 1, 2, 5, 6] {
            prov.answers.insert(ps[i].prompt_text.clone(), Ok("GO:9999999".into()));
        }
        let mut cfg = EvalConfig::new("m", Phase::Baseline);
        cfg.all_templates = true;
        let (run, _) = run_eval(&prov, &ps, &cfg).await.unwrap();
        assert_eq!(run.items.len(), 10);
        assert_eq!(run.scoring, Scoring::MajorityVote);
        assert_eq!(run.accuracy, 0.5);
        let pc = run.pair_correctness();
        assert_eq!(pc["GO_CC/GO:0000001"], false);
        assert_eq!(pc["GO_CC/GO:0000002"], true);
    }
}
