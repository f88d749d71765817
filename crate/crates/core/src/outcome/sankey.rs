use std::io::Write;

use serde::{Deserialize, Serialize};

use super::category::{OutcomeCategory, PairOutcome};
use crate::popularity::csv_error;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SankeyEdge {
    pub source: String,
    pub target: String,
    pub count: usize,
}

/// Flows from baseline state to outcome category, in the order
/// baseline-correct → {Correct, Loser}, baseline-incorrect → {Gainer,
/// Incorrect}. Zero-count edges are omitted.
pub fn sankey_edges(outcomes: &[PairOutcome]) -> Vec<SankeyEdge> {
    const ORDER: [(&str, OutcomeCategory); 4] = [
        ("baseline-correct", OutcomeCategory::Correct),
        ("baseline-correct", OutcomeCategory::Loser),
        ("baseline-incorrect", OutcomeCategory::Gainer),
        ("baseline-incorrect", OutcomeCategory::Incorrect),
    ];
    ORDER
        .iter()
        .filter_map(|&(source, cat)| {
            let count = outcomes.iter().filter(|o| o.category == cat).count();
            (count > 0).then(|| SankeyEdge { source: source.into(), target: cat.name().into(), count })
        })
        .collect()
}

pub fn write_sankey<W: Write>(writer: W, edges: &[SankeyEdge]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(["source", "target", "count"]).map_err(csv_error)?;
    for e in edges {
        w.serialize(e).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("writing Sankey edges", e))
}
