use std::fmt::Write as _;

use termbench_core::jsonl::read_jsonl;
use termbench_core::outcome::{
    check_accuracy, table3_row, table4_rows, table5_row, write_table3, write_table4, write_table5, PairOutcome,
};
use termbench_core::Direction;

use super::{open, render, StageContext};
use crate::error::CliError;

/// Row order within a terminology.
const DIRECTIONS: [Direction; 2] = [Direction::IdToTerm, Direction::TermToId];

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let outcomes: Vec<PairOutcome> = read_jsonl(open(&ctx.layout.outcomes())?)?;
    let (mut t3, mut t4, mut t5) = (Vec::new(), Vec::new(), Vec::new());
    let mut checks = String::new();
    for t in ctx.cfg.inputs.terminologies() {
        for d in DIRECTIONS {
            let group: Vec<PairOutcome> =
                outcomes.iter().filter(|o| o.terminology == t && o.direction == d).cloned().collect();
            if group.is_empty() {
                continue;
            }
            t3.push(table3_row(&group)?);
            t4.extend(table4_rows(&group)?);
            let row = table5_row(&group)?;
            let key = format!("{}/{}", t.code(), d.code());
            if let Some(&reported) = ctx.cfg.report.reported_accuracy.get(&key) {
                let c = check_accuracy(&row.metrics, reported);
                writeln!(checks, "{},{:.1},{:.1},{}", row.task, c.computed, c.reported, c.consistent)
                    .expect("string write");
                if !c.consistent {
                    log::warn!("{key}: reported accuracy {reported} differs from computed {:.1}", c.computed);
                }
            }
            t5.push(row);
        }
    }
    let bytes = render(|buf| write_table3(buf, &t3).map_err(Into::into))?;
    ctx.emit(&ctx.layout.report("table3.csv"), &bytes)?;
    let bytes = render(|buf| write_table4(buf, &t4).map_err(Into::into))?;
    ctx.emit(&ctx.layout.report("table4.csv"), &bytes)?;
    let bytes = render(|buf| write_table5(buf, &t5).map_err(Into::into))?;
    ctx.emit(&ctx.layout.report("table5.csv"), &bytes)?;
    if !checks.is_empty() {
        let csv = format!("task,computed,reported,consistent\n{checks}");
        ctx.emit(&ctx.layout.report("accuracy_check.csv"), csv.as_bytes())?;
    }
    Ok(())
}
