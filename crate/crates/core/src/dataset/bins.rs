use serde::{Deserialize, Serialize};

use super::rng::SampleRng;
use crate::popularity::RankedDistribution;
use crate::{Error, Result};

pub const DEFAULT_N_BINS: usize = 20;
pub const DEFAULT_PER_BIN: usize = 10;

/// Contiguous slice of the frequency ranking; bin 0 holds the most frequent
/// identifiers. Members are kept in rank order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyBin {
    pub index: usize,
    pub members: Vec<String>,
}

/// Splits a ranking into `n_bins` near-equal bins. The first `N mod n_bins`
/// bins receive one extra member.
pub fn stratify(dist: &RankedDistribution, n_bins: usize) -> Result<Vec<FrequencyBin>> {
    let n = dist.len();
    if n_bins == 0 {
        return Err(Error::Domain("n_bins must be positive".into()));
    }
    if n < n_bins {
        return Err(Error::Domain(format!("cannot split {n} identifiers into {n_bins} bins")));
    }
    let (base, extra) = (n / n_bins, n % n_bins);
    let mut bins = Vec::with_capacity(n_bins);
    let mut start = 0;
    for index in 0..n_bins {
        let size = base + usize::from(index < extra);
        let members = dist.entries[start..start + size].iter().map(|e| e.identifier.clone()).collect();
        bins.push(FrequencyBin { index, members });
        start += size;
    }
    Ok(bins)
}

/// Draws `per_bin` identifiers from each bin without replacement using one
/// [`SampleRng`] stream across bins in index order. Returns
/// `(bin_index, identifier)` with each bin's draw sorted by identifier.
pub fn sample_bins(bins: &[FrequencyBin], per_bin: usize, seed: u64) -> Result<Vec<(usize, String)>> {
    if let Some(small) = bins.iter().find(|b| b.members.len() < per_bin) {
        return Err(Error::Domain(format!(
            "bin {} has {} members, fewer than the {per_bin} requested",
            small.index,
            small.members.len()
        )));
    }
    let mut rng = SampleRng::new(seed);
    let mut out = Vec::with_capacity(bins.len() * per_bin);
    for bin in bins {
        let mut chosen: Vec<String> = rng
            .choose_indices(bin.members.len(), per_bin)
            .into_iter()
            .map(|i| bin.members[i].clone())
            .collect();
        chosen.sort();
        out.extend(chosen.into_iter().map(|id| (bin.index, id)));
    }
    Ok(out)
}
