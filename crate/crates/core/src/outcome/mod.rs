//! Baseline → fine-tuned transition categories, derived metrics, Sankey
//! edges and report tables.

mod category;
mod metrics;
mod report;
mod sankey;

pub use category::{build_outcomes, classify, OutcomeCategory, PairOutcome};
pub use metrics::{
    check_accuracy, derive_metrics, metrics_from_shares, round_one_decimal, AccuracyCheck, CategoryShares,
    DerivedMetrics, ACCURACY_TOLERANCE,
};
pub use report::{
    format_delta, format_pct, table3_row, table4_rows, table5_row, write_table3, write_table4, write_table5,
    Table3Row, Table4Row, Table5Row,
};
pub use sankey::{sankey_edges, write_sankey, SankeyEdge};
