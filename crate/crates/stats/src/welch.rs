//! Welch's unequal-variance two-sample t test.


use crate::distributions::t_two_sided_p;
use crate::summary::{mean, sample_variance};
use crate::StatsError;


#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchResult {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    /// Set when both samples have zero variance, so the usual standard
    /// error is zero and `t` is either 0 or infinite by convention.
    pub degenerate: bool,
}

/// Welch statistic from per-sample moments. Shared with the Games–Howell
/// procedure, which applies the same standard error and degrees of freedom.
pub(crate) fn welch_from_moments(
    mean_a: f64,
    var_a: f64,
    n_a: usize,
    mean_b: f64,
    var_b: f64,
    n_b: usize,
) -> (f64, f64, f64, bool) {
    let (na, nb) = (n_a as f64, n_b as f64);
    let qa = var_a / na;
    let qb = var_b / nb;
    let se2 = qa + qb;
    let diff = mean_a - mean_b;
    if se2 == 0.0 {
        let df = na + nb - 2.0;
        if diff == 0.0 {
            return (0.0, df, 0.0, true);
        }
        return (f64::INFINITY.copysign(diff), df, 0.0, true);
    }
    let se = se2.sqrt();
    let df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    (diff / se, df, se, false)
}

/// Two-sided Welch t test of `sample_a` against `sample_b`.
///
/// Returns `t = (mean_a - mean_b) / sqrt(s_a^2/n_a + s_b^2/n_b)`, the
/// Welch–Satterthwaite degrees of freedom and the two-sided p-value.
pub fn welch_t(sample_a: &[f64], sample_b: &[f64]) -> Result<WelchResult, StatsError> {
    if sample_a.len() < 2 || sample_b.len() < 2 {
        return Err(StatsError::Domain(format!(
            "welch_t needs at least 2 observations per sample (got {} and {})",
            sample_a.len(),
            sample_b.len()
        )));
    }
    let var_a = sample_variance(sample_a);
    let var_b = sample_variance(sample_b);
    if !var_a.is_finite() || !var_b.is_finite() {
        return Err(StatsError::Domain("sample variance is not finite".into()));
    }
    let (t, df, _se, degenerate) = welch_from_moments(
        mean(sample_a),
        var_a,
        sample_a.len(),
        mean(sample_b),
        var_b,
        sample_b.len(),
    );
    let p = if degenerate {
        if t == 0.0 { 1.0 } else { 0.0 }
    } else {
        t_two_sided_p(t, df)
    };
    Ok(WelchResult { t, df, p, degenerate })
}
