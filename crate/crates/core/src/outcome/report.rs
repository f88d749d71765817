use std::io::Write;

use super::category::{OutcomeCategory, PairOutcome};
use super::metrics::{pct_of, tenths, CategoryShares, DerivedMetrics, Pct};
use crate::dataset::Split;
use crate::popularity::csv_error;
use crate::{Direction, Error, Result, Terminology};

/// One decimal, rounded half away from zero; never prints `-0.0`.
pub fn format_pct(p: Pct) -> String {
    format_tenths(tenths(p))
}

/// Like [`format_pct`] with an explicit `+` on positive values.
pub fn format_delta(p: Pct) -> String {
    let t = tenths(p);
    if t > 0 {
        format!("+{}", format_tenths(t))
    } else {
        format_tenths(t)
    }
}

fn format_tenths(t: i64) -> String {
    let sign = if t < 0 { "-" } else { "" };
    format!("{sign}{}.{}", t.abs() / 10, t.abs() % 10)
}

fn format_f64(v: f64) -> String {
    format_tenths((v * 10.0).round() as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table3Row {
    pub mapping: String,
    pub baseline: Pct,
    pub finetuned: Pct,
}

impl Table3Row {
    pub fn delta(&self) -> Pct {
        self.finetuned - self.baseline
    }
}

fn single_mapping(outcomes: &[PairOutcome]) -> Result<(Terminology, Direction)> {
    let first = outcomes.first().ok_or_else(|| Error::Domain("no outcomes for report row".into()))?;
    if outcomes.iter().any(|o| (o.terminology, o.direction) != (first.terminology, first.direction)) {
        return Err(Error::Consistency("report row mixes terminologies or directions".into()));
    }
    Ok((first.terminology, first.direction))
}

/// Baseline and fine-tuned accuracy over training and validation pairs
/// together.
pub fn table3_row(outcomes: &[PairOutcome]) -> Result<Table3Row> {
    let (t, d) = single_mapping(outcomes)?;
    let n = outcomes.len();
    let base = outcomes.iter().filter(|o| o.baseline_correct).count();
    let ft = outcomes.iter().filter(|o| o.finetuned_correct).count();
    Ok(Table3Row {
        mapping: d.mapping_label(t),
        baseline: pct_of(base, n).expect("non-empty"),
        finetuned: pct_of(ft, n).expect("non-empty"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table4Row {
    pub terminology: String,
    pub direction: String,
    pub category: OutcomeCategory,
    pub validation: Pct,
    pub trained: Pct,
}

/// Four rows (Gainer, Loser, Correct, Incorrect) of category shares.
pub fn table4_rows(outcomes: &[PairOutcome]) -> Result<Vec<Table4Row>> {
    let (t, d) = single_mapping(outcomes)?;
    let train = CategoryShares::of_split(outcomes, Split::Train)?;
    let val = CategoryShares::of_split(outcomes, Split::Validation)?;
    Ok(OutcomeCategory::ALL
        .iter()
        .map(|&c| Table4Row {
            terminology: t.display_name().to_string(),
            direction: d.label(t).to_string(),
            category: c,
            validation: val.get(c),
            trained: train.get(c),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table5Row {
    pub task: String,
    pub metrics: DerivedMetrics,
}

pub fn table5_row(outcomes: &[PairOutcome]) -> Result<Table5Row> {
    let (t, d) = single_mapping(outcomes)?;
    Ok(Table5Row { task: d.mapping_label(t), metrics: super::derive_metrics(outcomes)? })
}

fn write_rows<W: Write, const N: usize>(writer: W, header: [&str; N], rows: Vec<[String; N]>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(&r).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("writing report table", e))
}

pub fn write_table3<W: Write>(writer: W, rows: &[Table3Row]) -> Result<()> {
    write_rows(
        writer,
        ["Mapping", "Baseline", "Fine-tuned", "Δ FT"],
        rows.iter()
            .map(|r| [r.mapping.clone(), format_pct(r.baseline), format_pct(r.finetuned), format_delta(r.delta())])
            .collect(),
    )
}

pub fn write_table4<W: Write>(writer: W, rows: &[Table4Row]) -> Result<()> {
    write_rows(
        writer,
        ["Terminology", "Direction", "Category", "Validation %", "Trained %"],
        rows.iter()
            .map(|r| {
                [
                    r.terminology.clone(),
                    r.direction.clone(),
                    r.category.name().to_string(),
                    format_pct(r.validation),
                    format_pct(r.trained),
                ]
            })
            .collect(),
    )
}

pub fn write_table5<W: Write>(writer: W, rows: &[Table5Row]) -> Result<()> {
    write_rows(
        writer,
        ["Task", "Memorized", "Generalized", "Degraded", "Accuracy", "Degraded (pooled)"],
        rows.iter()
            .map(|r| {
                let m = &r.metrics;
                [
                    r.task.clone(),
                    format_f64(m.memorized_pct),
                    format_f64(m.generalized_pct),
                    format_f64(m.degraded_pct),
                    format_f64(m.accuracy_pct),
                    m.degraded_pooled_pct.map(format_f64).unwrap_or_default(),
                ]
            })
            .collect(),
    )
}
