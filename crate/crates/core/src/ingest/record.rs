use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::jsonl::{read_jsonl, write_jsonl};
use crate::{Error, Result, Terminology};

/// One term ↔ identifier pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub terminology: Terminology,
    pub identifier: String,
    pub label: String,
    pub synonyms: Vec<String>,
    pub namespace: Option<String>,
}

impl TermRecord {
    /// Builds a record, trimming the label and cleaning synonyms (duplicates
    /// and copies of the label are dropped, first occurrence kept).
    pub fn new(
        terminology: Terminology,
        identifier: impl Into<String>,
        label: &str,
        synonyms: Vec<String>,
        namespace: Option<String>,
    ) -> Result<Self> {
        let identifier = identifier.into();
        terminology.validate_identifier(&identifier)?;
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::Validation(format!("{identifier}: label is empty")));
        }
        let mut clean: Vec<String> = Vec::with_capacity(synonyms.len());
        for s in synonyms {
            if s != label && !clean.contains(&s) {
                clean.push(s);
            }
        }
        Ok(Self { terminology, identifier, label: label.to_string(), synonyms: clean, namespace })
    }

    /// Checks the record invariants; used when loading records from disk.
    pub fn validate(&self) -> Result<()> {
        self.terminology.validate_identifier(&self.identifier)?;
        if self.label.trim().is_empty() {
            return Err(Error::Validation(format!("{}: label is empty", self.identifier)));
        }
        if self.synonyms.iter().any(|s| *s == self.label) {
            return Err(Error::Validation(format!("{}: synonyms contain the label", self.identifier)));
        }
        for (i, s) in self.synonyms.iter().enumerate() {
            if self.synonyms[..i].contains(s) {
                return Err(Error::Validation(format!("{}: duplicate synonym {s:?}", self.identifier)));
            }
        }
        Ok(())
    }
}

/// Writes the canonical record file (one JSON object per line).
pub fn write_records<W: Write>(writer: W, records: &[TermRecord]) -> Result<usize> {
    write_jsonl(writer, records)
}

/// Loads and validates a canonical record file.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<TermRecord>> {
    let records: Vec<TermRecord> = read_jsonl(reader)?;
    for r in &records {
        r.validate()?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_line_shape() {
        let r = TermRecord::new(Terminology::Hpo, "HP:0001337", " tremor ", vec![], None).unwrap();
        let mut buf = Vec::new();
        write_records(&mut buf, &[r]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"terminology\":\"HPO\",\"identifier\":\"HP:0001337\",\"label\":\"tremor\",\"synonyms\":[],\"namespace\":null}\n"
        );
    }

    #[test]
    fn synonyms_are_cleaned() {
        let r = TermRecord::new(
            Terminology::Hpo,
            "HP:0001337",
            "tremor",
            vec!["tremor".into(), "trembling".into(), "trembling".into()],
            None,
        )
        .unwrap();
        assert_eq!(r.synonyms, vec!["trembling".to_string()]);
    }

    #[test]
    fn invalid_loaded_record_is_rejected() {
        let line = "{\"terminology\":\"GO_CC\",\"identifier\":\"GO:12\",\"label\":\"x\",\"synonyms\":[],\"namespace\":null}\n";
        assert!(matches!(read_records(line.as_bytes()), Err(Error::Validation(_))));
    }
}
