use std::io::Read;

use crate::jsonl::decode_utf8;
use crate::{Error, Result, TermRecord, Terminology};

const HEADER: [&str; 2] = ["gene_symbol", "protein_name"];

/// Parses the two-column `gene_symbol<TAB>protein_name` map. Blank lines
/// are skipped.
pub fn parse_gene_map<R: Read>(mut reader: R) -> Result<Vec<TermRecord>> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| Error::io("reading gene map", e))?;
    let text = decode_utf8(&bytes)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r').split('\t').eq(HEADER) => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `gene_symbol\\tprotein_name`, got {header:?}"),
            })
        }
        None => return Ok(Vec::new()),
    }
    let mut records = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 2 tab-separated columns, found {}", cols.len()),
            });
        }
        records.push(TermRecord::new(Terminology::Gene, cols[0].trim(), cols[1], Vec::new(), None)?);
    }
    Ok(records)
}
