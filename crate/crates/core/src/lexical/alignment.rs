use serde::{Deserialize, Serialize};
use termbench_stats::summary::{compensated_sum, mean, sample_sd};
use termbench_stats::welch_t;

use super::vector::{cosine, EmbeddingVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentResult {
    pub n: usize,
    pub rowwise_mean: f64,
    pub rowwise_sd: f64,
    /// Over the per-term means of non-matching similarities.
    pub nonrow_mean: f64,
    pub nonrow_sd: f64,
    /// Over all n × (n − 1) non-matching similarities.
    pub nonrow_all_mean: f64,
    pub nonrow_all_sd: f64,
    pub delta_mean: f64,
    pub t_stat: f64,
    pub df: f64,
    pub p_value: f64,
    pub degenerate: bool,
}

/// Matched similarity `cos(term_i, id_i)` against the per-term mean of
/// `cos(term_i, id_j)` for `j ≠ i`, compared with Welch's t.
pub fn rowwise_alignment(term_vecs: &[EmbeddingVector], id_vecs: &[EmbeddingVector]) -> Result<AlignmentResult> {
    let n = term_vecs.len();
    if n != id_vecs.len() {
        return Err(Error::Domain(format!("{n} term vectors but {} identifier vectors", id_vecs.len())));
    }
    if n < 2 {
        return Err(Error::Domain(format!("row-wise alignment needs at least 2 pairs, got {n}")));
    }
    let mut rowwise = Vec::with_capacity(n);
    let mut nonrow = Vec::with_capacity(n);
    let mut all = Vec::with_capacity(n * (n - 1));
    for (i, t) in term_vecs.iter().enumerate() {
        let mut others = Vec::with_capacity(n - 1);
        for (j, id) in id_vecs.iter().enumerate() {
            let c = cosine(t, id)?;
            if i == j {
                rowwise.push(c);
            } else {
                others.push(c);
            }
        }
        nonrow.push(compensated_sum(others.iter().copied()) / (n - 1) as f64);
        all.extend(others);
    }
    let w = welch_t(&rowwise, &nonrow)?;
    let (rm, nm) = (mean(&rowwise), mean(&nonrow));
    Ok(AlignmentResult {
        n,
        rowwise_mean: rm,
        rowwise_sd: sample_sd(&rowwise),
        nonrow_mean: nm,
        nonrow_sd: sample_sd(&nonrow),
        nonrow_all_mean: mean(&all),
        nonrow_all_sd: if all.len() >= 2 { sample_sd(&all) } else { 0.0 },
        delta_mean: rm - nm,
        t_stat: w.t,
        df: w.df,
        p_value: w.p,
        degenerate: w.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> EmbeddingVector {
        EmbeddingVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn hand_example() {
        let terms = [v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])];
        let ids = [v(&[2.0, 0.0]), v(&[0.0, 3.0]), v(&[1.0, 0.0])];
        let r = rowwise_alignment(&terms, &ids).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // rowwise: 1, 1, 1/√2; non-row per term: (0+1)/2, (0+0)/2, (1/√2+1/√2)/2
        assert!((r.rowwise_mean - (2.0 + s) / 3.0).abs() < 1e-12);
        assert!((r.nonrow_mean - (0.5 + 0.0 + s) / 3.0).abs() < 1e-12);
        assert!((r.delta_mean - (1.5 - 0.0) / 3.0).abs() < 1e-12);
        assert!((r.nonrow_all_mean - (1.0 + 2.0 * s) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_pairs() {
        assert!(rowwise_alignment(&[v(&[1.0])], &[v(&[1.0])]).is_err());
    }
}
