use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::category::{OutcomeCategory, PairOutcome};
use crate::dataset::Split;
use crate::{Error, Result};

/// Exact percentage.
pub type Pct = Ratio<i64>;

/// Category percentages within one split, exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CategoryShares {
    pub gainer: Pct,
    pub loser: Pct,
    pub correct: Pct,
    pub incorrect: Pct,
    /// Split size when built from counts.
    pub n: Option<i64>,
}

impl CategoryShares {
    pub fn from_counts(gainer: i64, loser: i64, correct: i64, incorrect: i64) -> Result<Self> {
        let n = gainer + loser + correct + incorrect;
        if n == 0 {
            return Err(Error::Domain("split has no outcomes".into()));
        }
        let pct = |c: i64| Ratio::new(100 * c, n);
        Ok(Self { gainer: pct(gainer), loser: pct(loser), correct: pct(correct), incorrect: pct(incorrect), n: Some(n) })
    }

    /// From percentages printed with one decimal (e.g. `77.0`).
    pub fn from_percentages(gainer: f64, loser: f64, correct: f64, incorrect: f64) -> Self {
        let tenth = |v: f64| Ratio::new((v * 10.0).round() as i64, 10);
        Self { gainer: tenth(gainer), loser: tenth(loser), correct: tenth(correct), incorrect: tenth(incorrect), n: None }
    }

    pub fn of_split(outcomes: &[PairOutcome], split: Split) -> Result<Self> {
        let mut c = [0i64; 4];
        for o in outcomes.iter().filter(|o| o.split == split) {
            c[o.category as usize] += 1;
        }
        if c.iter().sum::<i64>() == 0 {
            return Err(Error::Domain(format!("no {} outcomes", split.code())));
        }
        Self::from_counts(
            c[OutcomeCategory::Gainer as usize],
            c[OutcomeCategory::Loser as usize],
            c[OutcomeCategory::Correct as usize],
            c[OutcomeCategory::Incorrect as usize],
        )
    }

    pub fn get(&self, category: OutcomeCategory) -> Pct {
        match category {
            OutcomeCategory::Gainer => self.gainer,
            OutcomeCategory::Loser => self.loser,
            OutcomeCategory::Correct => self.correct,
            OutcomeCategory::Incorrect => self.incorrect,
        }
    }
}

/// Rounds half away from zero to one decimal.
pub fn round_one_decimal(p: Pct) -> f64 {
    tenths(p) as f64 / 10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedMetrics {
    pub memorized_pct: f64,
    pub generalized_pct: f64,
    /// Sum of the per-split Loser percentages.
    pub degraded_pct: f64,
    /// Losers over all pairs of both splits, when split sizes are known.
    pub degraded_pooled_pct: Option<f64>,
    pub accuracy_pct: f64,
}

/// Memorized = %Gainer(Train), Generalized = %Gainer(Validation),
/// Degraded = %Loser(Train) + %Loser(Validation),
/// Accuracy = %Correct(Train) + %Gainer(Train) − %Loser(Train).
pub fn metrics_from_shares(train: &CategoryShares, validation: &CategoryShares) -> DerivedMetrics {
    let pooled = match (train.n, validation.n) {
        (Some(nt), Some(nv)) => {
            let losers = train.loser * Ratio::from_integer(nt) + validation.loser * Ratio::from_integer(nv);
            Some(round_one_decimal(losers / Ratio::from_integer(nt + nv)))
        }
        _ => None,
    };
    DerivedMetrics {
        memorized_pct: round_one_decimal(train.gainer),
        generalized_pct: round_one_decimal(validation.gainer),
        degraded_pct: round_one_decimal(train.loser + validation.loser),
        degraded_pooled_pct: pooled,
        accuracy_pct: round_one_decimal(train.correct + train.gainer - train.loser),
    }
}

pub fn derive_metrics(outcomes: &[PairOutcome]) -> Result<DerivedMetrics> {
    if let Some(first) = outcomes.first() {
        if outcomes.iter().any(|o| (o.terminology, o.direction) != (first.terminology, first.direction)) {
            return Err(Error::Consistency("derive_metrics needs outcomes of one terminology and direction".into()));
        }
    }
    let train = CategoryShares::of_split(outcomes, Split::Train)?;
    let validation = CategoryShares::of_split(outcomes, Split::Validation)?;
    Ok(metrics_from_shares(&train, &validation))
}

pub const ACCURACY_TOLERANCE: f64 = 0.05;

/// Formula accuracy set against an externally reported figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCheck {
    pub computed: f64,
    pub reported: f64,
    pub consistent: bool,
}

pub fn check_accuracy(metrics: &DerivedMetrics, reported: f64) -> AccuracyCheck {
    AccuracyCheck {
        computed: metrics.accuracy_pct,
        reported,
        consistent: (metrics.accuracy_pct - reported).abs() <= ACCURACY_TOLERANCE,
    }
}

pub(crate) fn pct_of(part: usize, whole: usize) -> Option<Pct> {
    (whole > 0).then(|| Ratio::new(100 * part as i64, whole as i64))
}

/// Whole tenths after rounding half away from zero.
pub(crate) fn tenths(p: Pct) -> i64 {
    (p * Ratio::from_integer(10)).round().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn go_term_to_id_row() {
        let train = CategoryShares::from_percentages(77.0, 0.0, 2.5, 20.5);
        let val = CategoryShares::from_percentages(0.7, 1.8, 0.6, 96.8);
        let m = metrics_from_shares(&train, &val);
        assert_eq!((m.memorized_pct, m.generalized_pct, m.degraded_pct, m.accuracy_pct), (77.0, 0.7, 1.8, 79.5));
        assert_eq!(m.degraded_pooled_pct, None);
    }

    #[test]
    fn all_correct() {
        let s = CategoryShares::from_counts(0, 0, 10, 0).unwrap();
        let m = metrics_from_shares(&s, &s);
        assert_eq!((m.memorized_pct, m.generalized_pct, m.degraded_pct, m.accuracy_pct), (0.0, 0.0, 0.0, 100.0));
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_one_decimal(Ratio::new(1, 20)), 0.1);
        assert_eq!(round_one_decimal(Ratio::new(-1, 20)), -0.1);
        assert_eq!(round_one_decimal(Ratio::new(100, 3)), 33.3);
        assert_eq!(round_one_decimal(Ratio::new(200, 3)), 66.7);
    }

    #[test]
    fn pooled_degraded() {
        let train = CategoryShares::from_counts(0, 1, 0, 9).unwrap();
        let val = CategoryShares::from_counts(0, 3, 0, 87).unwrap();
        let m = metrics_from_shares(&train, &val);
        assert_eq!(m.degraded_pct, 13.3);
        assert_eq!(m.degraded_pooled_pct, Some(4.0));
    }

    #[test]
    fn discrepancy_is_flagged() {
        let train = CategoryShares::from_percentages(48.0, 3.5, 22.5, 26.0);
        let val = CategoryShares::from_percentages(13.9, 6.0, 16.7, 63.4);
        let m = metrics_from_shares(&train, &val);
        assert_eq!(m.accuracy_pct, 67.0);
        assert!(!check_accuracy(&m, 70.5).consistent);
        assert!(check_accuracy(&m, 67.0).consistent);
    }
}
