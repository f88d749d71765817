use termbench_core::ingest::{filter_namespace, parse_gene_map, parse_obo_document, write_records};
use termbench_core::{TermIndex, Terminology};

use super::{open, render, StageContext};
use crate::error::CliError;

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let terminologies = ctx.cfg.inputs.terminologies();
    if terminologies.is_empty() {
        return Err(CliError::Config("no terminology source configured under [inputs]".into()));
    }
    let mut counts = serde_json::Map::new();
    for t in terminologies {
        let src = ctx.cfg.inputs.source(t).expect("configured");
        let (records, release) = match t {
            Terminology::Gene => (parse_gene_map(open(src)?)?, None),
            _ => {
                let doc = parse_obo_document(open(src)?, t)?;
                let records = match (t, ctx.cfg.inputs.go_namespace.as_deref()) {
                    (Terminology::GoCc, Some(ns)) => filter_namespace(&doc.records, ns),
                    _ => doc.records,
                };
                (records, doc.data_version)
            }
        };
        TermIndex::build(&records)?;
        log::info!("{}: {} records", t.code(), records.len());
        let bytes = render(|buf| write_records(buf, &records).map(drop).map_err(Into::into))?;
        ctx.emit(&ctx.layout.records(t), &bytes)?;
        ctx.manifest.release_tags.insert(t.code().to_string(), release);
        counts.insert(t.code().to_string(), records.len().into());
    }
    ctx.detail("records", counts);
    Ok(())
}
