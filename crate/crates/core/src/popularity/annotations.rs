use std::collections::BTreeMap;
use std::io::Read;

use crate::jsonl::decode_utf8;
use crate::{Error, Result, Terminology};

/// Parses `identifier<TAB>count` rows. A first row whose count column is
/// not numeric and reads `count` is treated as a header.
pub fn load_annotation_counts<R: Read>(mut reader: R, terminology: Terminology) -> Result<BTreeMap<String, u64>> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| Error::io("reading annotation counts", e))?;
    let text = decode_utf8(&bytes)?;
    let mut counts = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `identifier<TAB>count`, found {} column(s)", cols.len()),
            });
        }
        let (id, count) = (cols[0].trim(), cols[1].trim());
        if line_no == 1 && count == "count" {
            continue;
        }
        let value: i64 = count.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("count {count:?} is not an integer"),
        })?;
        if value < 0 {
            return Err(Error::Validation(format!("line {line_no}: negative count {value} for {id}")));
        }
        terminology.validate_identifier(id)?;
        if counts.insert(id.to_string(), value as u64).is_some() {
            return Err(Error::Validation(format!("duplicate annotation row for {id}")));
        }
    }
    Ok(counts)
}
