use termbench_core::dataset::{sample_bins, stratify};
use termbench_core::popularity::RankedDistribution;

fn zipf(n: usize) -> RankedDistribution {
    RankedDistribution::from_counts((1..=n).map(|i| (format!("ID{i:05}"), (100_000 / i) as u64))).unwrap()
}

fn render(sample: &[(usize, String)]) -> String {
    sample.iter().map(|(b, id)| format!("{b}\t{id}\n")).collect()
}

#[test]
fn matches_independent_python_sampler() {
    let golden = include_str!("fixtures/zipf4000_seed42.tsv");
    let bins = stratify(&zipf(4000), 20).unwrap();
    let ours = render(&sample_bins(&bins, 10, 42).unwrap());
    assert_eq!(ours, golden);
}

#[test]
fn bins_have_disjoint_rank_ranges() {
    let dist = zipf(4000);
    let bins = stratify(&dist, 20).unwrap();
    let rank: std::collections::HashMap<&str, usize> =
        dist.entries.iter().map(|e| (e.identifier.as_str(), e.rank)).collect();
    let ranges: Vec<(usize, usize)> = bins
        .iter()
        .map(|b| {
            let r: Vec<usize> = b.members.iter().map(|m| rank[m.as_str()]).collect();
            (*r.iter().min().unwrap(), *r.iter().max().unwrap())
        })
        .collect();
    for w in ranges.windows(2) {
        assert!(w[0].1 < w[1].0, "{ranges:?}");
    }
    let sample = sample_bins(&bins, 10, 42).unwrap();
    for (b, id) in &sample {
        let r = rank[id.as_str()];
        assert!((ranges[*b].0..=ranges[*b].1).contains(&r));
    }
}
