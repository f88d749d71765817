//! Popularity proxies: PMC identifier and term counts plus curated
//! annotation counts, their log transform, and rank–frequency ranking.

mod annotations;
mod cache;
mod pmc;
mod ranking;
mod record;

pub use annotations::load_annotation_counts;
pub use cache::{CacheEntry, PopularityCache};
pub use pmc::{identifier_query, term_query, PmcClient, PmcCount, DEFAULT_ESEARCH_URL, PMC_DB};
pub use ranking::{rank_frequency, RankedDistribution, RankedEntry};
pub(crate) use record::csv_error;
pub use record::{read_popularity_csv, write_popularity_csv, PopularityRecord, Proxy};

/// `log10(count + 1)`.
pub fn laplace_log(count: u64) -> f64 {
    (count as f64 + 1.0).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_powers_of_ten() {
        assert_eq!(laplace_log(0), 0.0);
        assert_eq!(laplace_log(99), 2.0);
        assert_eq!(laplace_log(999), 3.0);
    }

    proptest! {
        #[test]
        fn monotone(a in 0u64..10_000_000, b in 0u64..10_000_000) {
            prop_assume!(a != b);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(laplace_log(lo) < laplace_log(hi));
        }
    }
}
