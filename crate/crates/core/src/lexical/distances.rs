use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};
use termbench_stats::summary::{five_number_summary, mean};

use super::pca::{PcaProjection, PointClass};
use crate::popularity::csv_error;
use crate::{Error, Result, Terminology};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminologyDistances {
    pub terminology: Terminology,
    pub n_pairs: usize,
    pub paired_mean: f64,
    pub nonpaired_mean: f64,
    /// min, q1, median, q3, max
    pub paired_summary: [f64; 5],
    pub nonpaired_summary: [f64; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceAnalysis {
    pub paired_mean: f64,
    pub nonpaired_mean: f64,
    pub per_terminology: Vec<TerminologyDistances>,
}

/// Euclidean distances in the projected plane between each term and its
/// own identifier versus every other identifier of the same terminology.
/// `pairs` are `(terminology, term_label, identifier_label)`.
pub fn paired_distance_analysis(
    projection: &PcaProjection,
    pairs: &[(Terminology, String, String)],
) -> Result<DistanceAnalysis> {
    if pairs.is_empty() {
        return Err(Error::Domain("no pairs for distance analysis".into()));
    }
    let index: HashMap<(Terminology, PointClass, &str), &[f64]> = projection
        .points
        .iter()
        .map(|p| ((p.terminology, p.class, p.label.as_str()), p.coords.as_slice()))
        .collect();
    let lookup = |t: Terminology, class: PointClass, label: &str| {
        index.get(&(t, class, label)).copied().ok_or_else(|| {
            Error::Consistency(format!("no projected {} point {label:?} for {t}", class.code()))
        })
    };

    let mut by_term: BTreeMap<Terminology, Vec<(&[f64], &[f64])>> = BTreeMap::new();
    for (t, term, id) in pairs {
        by_term
            .entry(*t)
            .or_default()
            .push((lookup(*t, PointClass::Term, term)?, lookup(*t, PointClass::Identifier, id)?));
    }

    let (mut all_paired, mut all_nonpaired) = (Vec::new(), Vec::new());
    let mut per_terminology = Vec::new();
    for (t, group) in by_term {
        let mut paired = Vec::with_capacity(group.len());
        let mut nonpaired = Vec::new();
        for (i, (term, id)) in group.iter().enumerate() {
            paired.push(euclid(term, id));
            for (j, (_, other)) in group.iter().enumerate() {
                if i != j {
                    nonpaired.push(euclid(term, other));
                }
            }
        }
        let zeros = [0.0; 5];
        per_terminology.push(TerminologyDistances {
            terminology: t,
            n_pairs: group.len(),
            paired_mean: mean(&paired),
            nonpaired_mean: if nonpaired.is_empty() { f64::NAN } else { mean(&nonpaired) },
            paired_summary: five_number_summary(&paired).unwrap_or(zeros),
            nonpaired_summary: five_number_summary(&nonpaired).unwrap_or([f64::NAN; 5]),
        });
        all_paired.extend(paired);
        all_nonpaired.extend(nonpaired);
    }
    Ok(DistanceAnalysis {
        paired_mean: mean(&all_paired),
        nonpaired_mean: if all_nonpaired.is_empty() { f64::NAN } else { mean(&all_nonpaired) },
        per_terminology,
    })
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// One row per (terminology, kind) with mean and five-number summary.
pub fn write_distance_summary<W: Write>(writer: W, analysis: &DistanceAnalysis) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["terminology", "kind", "n", "mean", "min", "q1", "median", "q3", "max"]).map_err(csv_error)?;
    for d in &analysis.per_terminology {
        let np = d.n_pairs * d.n_pairs.saturating_sub(1);
        for (kind, n, m, s) in [
            ("paired", d.n_pairs, d.paired_mean, d.paired_summary),
            ("nonpaired", np, d.nonpaired_mean, d.nonpaired_summary),
        ] {
            let mut row = vec![d.terminology.code().to_string(), kind.to_string(), n.to_string(), format!("{m:.6}")];
            row.extend(s.iter().map(|v| format!("{v:.6}")));
            w.write_record(&row).map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| Error::io("writing distance summary", e))
}
