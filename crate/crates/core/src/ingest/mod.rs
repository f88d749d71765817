//! Terminology ingestion: OBO flat files, the gene/protein map, and the
//! canonical record file.

mod gene_map;
mod index;
mod obo;
mod record;

pub use gene_map::parse_gene_map;
pub use index::TermIndex;
pub use obo::{filter_namespace, parse_obo, parse_obo_document, OboDocument};
pub use record::{read_records, write_records, TermRecord};
