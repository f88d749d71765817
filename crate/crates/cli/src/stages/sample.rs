use std::fmt::Write as _;

use termbench_core::dataset::{make_split, sample_bins, stratify, write_split, ValidationCap};
use termbench_core::ingest::read_records;
use termbench_core::popularity::{rank_frequency, read_popularity_csv};

use super::{open, render, StageContext};
use crate::error::CliError;

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let run = &ctx.cfg.run;
    let proxy = ctx.cfg.popularity.ranking_proxy;
    let cap = run.validation_cap.map(|size| ValidationCap { size, seed: run.validation_seed });
    let mut pairs = Vec::new();
    let mut bins_csv = String::from("terminology,bin,size,first_rank,last_rank,max_count,min_count\n");
    for t in ctx.cfg.inputs.terminologies() {
        let records = read_records(open(&ctx.layout.records(t))?)?;
        let popularity = read_popularity_csv(open(&ctx.layout.popularity(t))?)?;
        let dist = rank_frequency(&popularity, proxy)?;
        let bins = stratify(&dist, run.n_bins)?;
        let mut start = 0;
        for b in &bins {
            let members = &dist.entries[start..start + b.members.len()];
            let (first, last) = (&members[0], &members[members.len() - 1]);
            writeln!(
                bins_csv,
                "{},{},{},{},{},{},{}",
                t.code(),
                b.index,
                b.members.len(),
                first.rank,
                last.rank,
                first.count,
                last.count
            )
            .expect("string write");
            start += b.members.len();
        }
        let sampled = sample_bins(&bins, run.per_bin, run.seed)?;
        pairs.extend(make_split(&records, &bins, &sampled, cap)?);
    }
    let bytes = render(|buf| write_split(buf, &pairs).map(drop).map_err(Into::into))?;
    ctx.emit(&ctx.layout.split(), &bytes)?;
    ctx.emit(&ctx.layout.bins(), bins_csv.as_bytes())?;

    ctx.manifest.seeds.insert("sampling".into(), run.seed);
    ctx.manifest.seeds.insert("validation_cap".into(), run.validation_seed);
    ctx.manifest.validation_cap = run.validation_cap;
    ctx.detail("pairs", pairs.len());
    Ok(())
}
