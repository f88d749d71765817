use std::collections::HashMap;

use serde::Serialize;
use termbench_core::dataset::{read_split, Split};
use termbench_core::eval::Phase;
use termbench_core::jsonl::write_jsonl;
use termbench_core::outcome::{
    build_outcomes, derive_metrics, format_pct, sankey_edges, write_sankey, CategoryShares, DerivedMetrics,
    OutcomeCategory, PairOutcome,
};
use termbench_core::dataset::pair_id;
use termbench_core::Direction;

use super::eval::load_run;
use super::{open, pretty_json, render, StageContext};
use crate::error::CliError;

#[derive(Serialize)]
struct ShareReport {
    n: Option<i64>,
    percent: Vec<(&'static str, String)>,
}

impl From<CategoryShares> for ShareReport {
    fn from(s: CategoryShares) -> Self {
        Self { n: s.n, percent: OutcomeCategory::ALL.iter().map(|&c| (c.name(), format_pct(s.get(c)))).collect() }
    }
}

#[derive(Serialize)]
struct MetricsReport {
    terminology: String,
    direction: Direction,
    train: ShareReport,
    validation: ShareReport,
    derived: DerivedMetrics,
}

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let pairs = read_split(open(&ctx.layout.split())?)?;
    let split_of: HashMap<String, Split> =
        pairs.iter().map(|p| (pair_id(p.terminology, &p.identifier), p.split)).collect();
    let mut all: Vec<PairOutcome> = Vec::new();
    for t in ctx.cfg.inputs.terminologies() {
        for d in Direction::ALL {
            let base = load_run(ctx.layout, Phase::Baseline, t, d)?;
            let ft = load_run(ctx.layout, Phase::FineTuned, t, d)?;
            let outcomes = build_outcomes(&base, &ft, &split_of)?;
            let report = MetricsReport {
                terminology: t.code().to_string(),
                direction: d,
                train: CategoryShares::of_split(&outcomes, Split::Train)?.into(),
                validation: CategoryShares::of_split(&outcomes, Split::Validation)?.into(),
                derived: derive_metrics(&outcomes)?,
            };
            ctx.emit(&ctx.layout.metrics(t, d), &pretty_json(&report)?)?;
            for s in Split::ALL {
                let subset: Vec<PairOutcome> = outcomes.iter().filter(|o| o.split == s).cloned().collect();
                let bytes = render(|buf| write_sankey(buf, &sankey_edges(&subset)).map_err(Into::into))?;
                ctx.emit(&ctx.layout.sankey(t, d, s), &bytes)?;
            }
            all.extend(outcomes);
        }
    }
    let bytes = render(|buf| write_jsonl(buf, &all).map(drop).map_err(Into::into))?;
    ctx.emit(&ctx.layout.outcomes(), &bytes)?;
    ctx.detail("outcomes", all.len());
    Ok(())
}
