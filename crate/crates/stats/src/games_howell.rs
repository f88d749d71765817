//! Games–Howell pairwise comparisons.
//!
//! Each pair uses its own Welch standard error and degrees of freedom; the
//! statistic `q = |mean_i − mean_j| · √2 / se` is referred to the studentized
//! range distribution with `k` equal to the total number of groups.

use crate::studentized_range::studentized_range_cdf;
use crate::summary::{mean, sample_variance};
use crate::welch::welch_from_moments;
use crate::StatsError;

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseComparison {
    pub group_i: String,
    pub group_j: String,
    pub mean_diff: f64,
    pub se: f64,
    pub t: f64,
    pub df: f64,
    pub p_adj: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GamesHowellResult {
    pub k: usize,
    pub comparisons: Vec<PairwiseComparison>,
}

impl GamesHowellResult {
    /// The comparison between two labels, in either order.
    pub fn pair(&self, a: &str, b: &str) -> Option<&PairwiseComparison> {
        self.comparisons
            .iter()
            .find(|c| (c.group_i == a && c.group_j == b) || (c.group_i == b && c.group_j == a))
    }
}

/// Runs all `k·(k−1)/2` comparisons, in input order `(0,1), (0,2), …`.
pub fn games_howell<S: AsRef<str>>(groups: &[(S, Vec<f64>)]) -> Result<GamesHowellResult, StatsError> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::Domain(format!("Games–Howell needs at least 2 groups (got {k})")));
    }
    let mut moments = Vec::with_capacity(k);
    for (label, values) in groups {
        if values.len() < 2 {
            return Err(StatsError::Domain(format!(
                "group {:?} has {} observation(s); at least 2 are required",
                label.as_ref(),
                values.len()
            )));
        }
        let var = sample_variance(values);
        if !var.is_finite() {
            return Err(StatsError::Domain(format!("group {:?} has non-finite variance", label.as_ref())));
        }
        moments.push((mean(values), var, values.len()));
    }

    let mut comparisons = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let (mi, vi, ni) = moments[i];
            let (mj, vj, nj) = moments[j];
            let (t, df, se, degenerate) = welch_from_moments(mi, vi, ni, mj, vj, nj);
            let p_adj = if degenerate {
                if t == 0.0 { 1.0 } else { 0.0 }
            } else {
                let q = t.abs() * std::f64::consts::SQRT_2;
                (1.0 - studentized_range_cdf(q, k, df)?).clamp(0.0, 1.0)
            };
            comparisons.push(PairwiseComparison {
                group_i: groups[i].0.as_ref().to_string(),
                group_j: groups[j].0.as_ref().to_string(),
                mean_diff: mi - mj,
                se,
                t,
                df,
                p_adj,
                degenerate,
            });
        }
    }
    Ok(GamesHowellResult { k, comparisons })
}
