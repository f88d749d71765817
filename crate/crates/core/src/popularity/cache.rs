use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::jsonl::read_jsonl;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub query: String,
    pub db: String,
    pub count: u64,
    pub retrieved_at: DateTime<Utc>,
}

/// Append-only JSONL cache keyed by `(query, db)`; the last entry for a
/// key wins on load.
#[derive(Debug, Default)]
pub struct PopularityCache {
    entries: HashMap<(String, String), CacheEntry>,
    sink: Option<(PathBuf, File)>,
}

impl PopularityCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists and appends new entries to it.
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = Self::default();
        if path.exists() {
            let f = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
            let rows: Vec<CacheEntry> = read_jsonl(BufReader::new(f))?;
            for row in rows {
                cache.entries.insert((row.query.clone(), row.db.clone()), row);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(format!("opening {} for append", path.display()), e))?;
        cache.sink = Some((path.to_path_buf(), file));
        Ok(cache)
    }

    pub fn get(&self, query: &str, db: &str) -> Option<&CacheEntry> {
        self.entries.get(&(query.to_string(), db.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, entry: CacheEntry) -> Result<()> {
        if let Some((path, file)) = self.sink.as_mut() {
            let mut line = serde_json::to_string(&entry)?;
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| Error::io(format!("appending to {}", path.display()), e))?;
        }
        self.entries.insert((entry.query.clone(), entry.db.clone()), entry);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(q: &str, count: u64) -> CacheEntry {
        CacheEntry { query: q.into(), db: "pmc".into(), count, retrieved_at: "2024-01-01T00:00:00Z".parse().unwrap() }
    }

    #[test]
    fn last_entry_wins_after_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let mut c = PopularityCache::open(&path).unwrap();
            c.insert(entry("a", 1)).unwrap();
            c.insert(entry("a", 2)).unwrap();
            c.insert(entry("b", 5)).unwrap();
        }
        let c = PopularityCache::open(&path).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get("a", "pmc").unwrap().count, 2);
        assert!(c.get("a", "pubmed").is_none());
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 3);
    }
}
