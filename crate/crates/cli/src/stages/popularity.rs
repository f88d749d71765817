use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Duration;

use termbench_core::http::{eutils_limiter, HttpTransport, ReqwestTransport};
use termbench_core::ingest::read_records;
use termbench_core::popularity::{
    load_annotation_counts, rank_frequency, write_popularity_csv, PmcClient, PopularityCache,
};

use super::{open, render, StageContext};
use crate::config::{env_secret, NCBI_KEY_VAR};
use crate::error::{io, CliError};

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let cfg = &ctx.cfg.popularity;
    let cache_path = ctx.layout.pmc_cache();
    if !cache_path.exists() {
        std::fs::create_dir_all(ctx.stage_dir()).map_err(io("creating popularity directory"))?;
        if let Some(seed) = &cfg.cache_seed {
            std::fs::copy(seed, &cache_path).map_err(io(format!("copying {}", seed.display())))?;
        }
    }
    let cache = PopularityCache::open(&cache_path)?;
    let api_key = env_secret(NCBI_KEY_VAR);
    let transport: Arc<dyn HttpTransport> =
        Arc::new(ReqwestTransport::new(Duration::from_secs(ctx.cfg.popularity.timeout_secs))?);
    let client = PmcClient::new(transport, eutils_limiter(api_key.is_some()), cache)
        .with_endpoint(cfg.endpoint.clone())
        .with_api_key(api_key)
        .offline(cfg.offline);
    let concurrency = ctx.cfg.run.concurrency;

    let proxy = cfg.ranking_proxy;
    let mut ranking_sizes = BTreeMap::new();
    for t in ctx.cfg.inputs.terminologies() {
        let records = read_records(open(&ctx.layout.records(t))?)?;
        let annotations = match ctx.cfg.inputs.annotations(t) {
            Some(p) => load_annotation_counts(open(p)?, t)?,
            None => BTreeMap::new(),
        };
        let popularity = ctx.runtime.block_on(client.collect_popularity(&records, &annotations, concurrency))?;
        let bytes = render(|buf| write_popularity_csv(buf, &popularity).map_err(Into::into))?;
        ctx.emit(&ctx.layout.popularity(t), &bytes)?;

        let dist = rank_frequency(&popularity, proxy)?;
        let mut csv = String::from("rank,identifier,count,log10_rank,log10_count_plus_1\n");
        for (e, (lr, lc)) in dist.entries.iter().zip(dist.log_log_points()) {
            writeln!(csv, "{},{},{},{lr:.6},{lc:.6}", e.rank, e.identifier, e.count).expect("string write");
        }
        ctx.emit(&ctx.layout.rank_frequency(t), csv.as_bytes())?;
        ranking_sizes.insert(t.code().to_string(), dist.len());
    }
    if cache_path.exists() {
        ctx.track(&cache_path)?;
    }
    ctx.detail("ranking_proxy", proxy);
    ctx.detail("ranked", ranking_sizes);
    Ok(())
}
