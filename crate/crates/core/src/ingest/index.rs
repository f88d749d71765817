use std::collections::BTreeMap;

use crate::{Error, Result, TermRecord, Terminology};

/// Lookup by identifier and by lowercased label for one terminology.
#[derive(Debug, Clone, Default)]
pub struct TermIndex {
    by_identifier: BTreeMap<String, TermRecord>,
    by_label: BTreeMap<String, String>,
}

impl TermIndex {
    /// Fails on mixed terminologies, duplicate identifiers, or two records
    /// whose labels collide after lowercasing.
    pub fn build(records: &[TermRecord]) -> Result<Self> {
        let mut index = TermIndex::default();
        let mut terminology: Option<Terminology> = None;
        for r in records {
            match terminology {
                Some(t) if t != r.terminology => {
                    return Err(Error::Consistency(format!(
                        "index mixes terminologies {t} and {}",
                        r.terminology
                    )))
                }
                _ => terminology = Some(r.terminology),
            }
            if index.by_identifier.contains_key(&r.identifier) {
                return Err(Error::Consistency(format!("duplicate identifier {}", r.identifier)));
            }
            let key = r.label.to_lowercase();
            if let Some(other) = index.by_label.get(&key) {
                return Err(Error::Consistency(format!(
                    "duplicate label {:?} ({} and {})",
                    r.label, other, r.identifier
                )));
            }
            index.by_label.insert(key, r.identifier.clone());
            index.by_identifier.insert(r.identifier.clone(), r.clone());
        }
        Ok(index)
    }

    pub fn len(&self) -> usize {
        self.by_identifier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_identifier.is_empty()
    }

    pub fn get(&self, identifier: &str) -> Option<&TermRecord> {
        self.by_identifier.get(identifier)
    }

    pub fn by_label(&self, label: &str) -> Option<&TermRecord> {
        self.by_label.get(&label.to_lowercase()).and_then(|id| self.by_identifier.get(id))
    }

    pub fn records(&self) -> impl Iterator<Item = &TermRecord> {
        self.by_identifier.values()
    }
}
