use std::io::{Read, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Terminology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proxy {
    IdCountPmc,
    TermCountPmc,
    AnnotationCount,
}

impl Proxy {
    pub const ALL: [Proxy; 3] = [Proxy::IdCountPmc, Proxy::TermCountPmc, Proxy::AnnotationCount];

    pub fn code(self) -> &'static str {
        match self {
            Proxy::IdCountPmc => "id_count_pmc",
            Proxy::TermCountPmc => "term_count_pmc",
            Proxy::AnnotationCount => "annotation_count",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityRecord {
    pub terminology: Terminology,
    pub identifier: String,
    pub label: String,
    pub id_count_pmc: u64,
    pub term_count_pmc: u64,
    pub annotation_count: u64,
    /// Latest retrieval time among the PMC counts; `None` when the counts
    /// did not come from a fetch with provenance.
    pub retrieved_at: Option<DateTime<Utc>>,
}

impl PopularityRecord {
    pub fn count(&self, proxy: Proxy) -> u64 {
        match proxy {
            Proxy::IdCountPmc => self.id_count_pmc,
            Proxy::TermCountPmc => self.term_count_pmc,
            Proxy::AnnotationCount => self.annotation_count,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    terminology: Terminology,
    identifier: String,
    label: String,
    id_count_pmc: u64,
    term_count_pmc: u64,
    annotation_count: u64,
}

/// Writes the popularity table
/// `terminology,identifier,label,id_count_pmc,term_count_pmc,annotation_count`.
pub fn write_popularity_csv<W: Write>(writer: W, records: &[PopularityRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(Row {
            terminology: r.terminology,
            identifier: r.identifier.clone(),
            label: r.label.clone(),
            id_count_pmc: r.id_count_pmc,
            term_count_pmc: r.term_count_pmc,
            annotation_count: r.annotation_count,
        })
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::io("writing popularity table", e))
}

pub fn read_popularity_csv<R: Read>(reader: R) -> Result<Vec<PopularityRecord>> {
    let mut rd = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rd.deserialize::<Row>() {
        let row = row.map_err(csv_error)?;
        row.terminology.validate_identifier(&row.identifier)?;
        out.push(PopularityRecord {
            terminology: row.terminology,
            identifier: row.identifier,
            label: row.label,
            id_count_pmc: row.id_count_pmc,
            term_count_pmc: row.term_count_pmc,
            annotation_count: row.annotation_count,
            retrieved_at: None,
        });
    }
    Ok(out)
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("CSV", io),
        other => Error::Parse { line, message: format!("{other:?}") },
    }
}
