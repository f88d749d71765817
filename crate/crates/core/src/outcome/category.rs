use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Split;
use crate::eval::{EvalRun, Phase};
use crate::{Direction, Error, Result, Terminology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutcomeCategory {
    Gainer,
    Loser,
    Correct,
    Incorrect,
}

impl OutcomeCategory {
    pub const ALL: [OutcomeCategory; 4] =
        [OutcomeCategory::Gainer, OutcomeCategory::Loser, OutcomeCategory::Correct, OutcomeCategory::Incorrect];

    pub fn name(self) -> &'static str {
        match self {
            OutcomeCategory::Gainer => "Gainer",
            OutcomeCategory::Loser => "Loser",
            OutcomeCategory::Correct => "Correct",
            OutcomeCategory::Incorrect => "Incorrect",
        }
    }
}

pub fn classify(baseline_correct: bool, finetuned_correct: bool) -> OutcomeCategory {
    match (baseline_correct, finetuned_correct) {
        (false, true) => OutcomeCategory::Gainer,
        (true, false) => OutcomeCategory::Loser,
        (true, true) => OutcomeCategory::Correct,
        (false, false) => OutcomeCategory::Incorrect,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub pair_id: String,
    pub terminology: Terminology,
    pub direction: Direction,
    pub split: Split,
    pub baseline_correct: bool,
    pub finetuned_correct: bool,
    pub category: OutcomeCategory,
}

/// Pairs the two runs of one (terminology, direction) by pair id.
/// `split_of` maps each pair id to its split; the three pair sets must
/// agree exactly.
pub fn build_outcomes(
    baseline: &EvalRun,
    finetuned: &EvalRun,
    split_of: &HashMap<String, Split>,
) -> Result<Vec<PairOutcome>> {
    if baseline.phase != Phase::Baseline || finetuned.phase != Phase::FineTuned {
        return Err(Error::Consistency("expected one baseline and one fine-tuned run".into()));
    }
    if (baseline.terminology, baseline.direction) != (finetuned.terminology, finetuned.direction) {
        return Err(Error::Consistency(format!(
            "runs disagree: {}/{} vs {}/{}",
            baseline.terminology, baseline.direction, finetuned.terminology, finetuned.direction
        )));
    }
    let base = baseline.pair_correctness();
    let ft = finetuned.pair_correctness();
    if base.len() != ft.len() || base.keys().ne(ft.keys()) {
        return Err(Error::Consistency(format!(
            "baseline and fine-tuned runs cover different pairs for {}/{}",
            baseline.terminology, baseline.direction
        )));
    }
    base.iter()
        .map(|(pair_id, &b)| {
            let f = ft[pair_id];
            let split = *split_of
                .get(pair_id)
                .ok_or_else(|| Error::Consistency(format!("{pair_id} is not in the split file")))?;
            Ok(PairOutcome {
                pair_id: pair_id.clone(),
                terminology: baseline.terminology,
                direction: baseline.direction,
                split,
                baseline_correct: b,
                finetuned_correct: f,
                category: classify(b, f),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_table() {
        assert_eq!(classify(false, true), OutcomeCategory::Gainer);
        assert_eq!(classify(true, false), OutcomeCategory::Loser);
        assert_eq!(classify(true, true), OutcomeCategory::Correct);
        assert_eq!(classify(false, false), OutcomeCategory::Incorrect);
    }
}
