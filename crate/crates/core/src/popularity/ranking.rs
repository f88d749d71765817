use std::cmp::Ordering;

use super::{laplace_log, PopularityRecord, Proxy};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedEntry {
    pub identifier: String,
    pub count: u64,
    /// 1-based.
    pub rank: usize,
}

/// Identifiers ordered by descending count, ties broken by ascending
/// identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedDistribution {
    pub entries: Vec<RankedEntry>,
}

impl RankedDistribution {
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut pairs: Vec<(String, u64)> = counts.into_iter().map(|(id, c)| (id.into(), c)).collect();
        if pairs.is_empty() {
            return Err(Error::Domain("cannot rank an empty set of identifiers".into()));
        }
        pairs.sort_by(|a, b| match b.1.cmp(&a.1) {
            Ordering::Equal => a.0.cmp(&b.0),
            other => other,
        });
        let entries = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (identifier, count))| RankedEntry { identifier, count, rank: i + 1 })
            .collect();
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(log10 rank, log10(count + 1))` for rank–frequency plots.
    pub fn log_log_points(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(|e| ((e.rank as f64).log10(), laplace_log(e.count))).collect()
    }
}

/// Ranks `records` by the chosen popularity proxy.
pub fn rank_frequency(records: &[PopularityRecord], proxy: Proxy) -> Result<RankedDistribution> {
    if let Some(first) = records.first() {
        if let Some(other) = records.iter().find(|r| r.terminology != first.terminology) {
            return Err(Error::Consistency(format!(
                "rank_frequency mixes {} and {}",
                first.terminology, other.terminology
            )));
        }
    }
    RankedDistribution::from_counts(records.iter().map(|r| (r.identifier.clone(), r.count(proxy))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(d: &RankedDistribution) -> Vec<(&str, usize)> {
        d.entries.iter().map(|e| (e.identifier.as_str(), e.rank)).collect()
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let d = RankedDistribution::from_counts([("A", 5), ("B", 9), ("C", 5)]).unwrap();
        assert_eq!(ids(&d), vec![("B", 1), ("A", 2), ("C", 3)]);
    }

    #[test]
    fn all_equal_counts() {
        let d = RankedDistribution::from_counts([("Z", 1), ("X", 1), ("Y", 1)]).unwrap();
        assert_eq!(ids(&d), vec![("X", 1), ("Y", 2), ("Z", 3)]);
    }

    #[test]
    fn empty_is_domain_error() {
        assert!(matches!(
            RankedDistribution::from_counts(Vec::<(String, u64)>::new()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zipf_slope_is_minus_one() {
        let d = RankedDistribution::from_counts((1..=100u64).map(|i| (format!("ID{i:03}"), 1000 / i))).unwrap();
        let pts = d.log_log_points();
        // ordinary least squares, written out
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((slope + 1.0).abs() < 0.1, "slope {slope}");
    }

    proptest! {
        #[test]
        fn ranking_permutes_input(counts in prop::collection::btree_map("[A-Z]{1,4}", 0u64..50, 1..60)) {
            let d = RankedDistribution::from_counts(counts.clone()).unwrap();
            prop_assert_eq!(d.len(), counts.len());
            for (i, e) in d.entries.iter().enumerate() {
                prop_assert_eq!(e.rank, i + 1);
                prop_assert_eq!(counts.get(&e.identifier), Some(&e.count));
                if i > 0 {
                    let prev = &d.entries[i - 1];
                    prop_assert!(prev.count > e.count || (prev.count == e.count && prev.identifier < e.identifier));
                }
            }
        }
    }
}
