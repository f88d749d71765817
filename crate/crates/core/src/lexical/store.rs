use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::vector::EmbeddingVector;
use crate::jsonl::read_jsonl;
use crate::{Error, Result};

pub const BINARY_MAGIC: &[u8; 4] = b"EMB1";

#[derive(Serialize, Deserialize)]
struct StoreLine {
    text: String,
    dim: usize,
    vector: EmbeddingVector,
}

/// Text → pooled vector map with JSONL and compact binary forms.
///
/// Binary layout (little-endian): `EMB1`, `u32` record count, then per
/// record `u32` text length, UTF-8 text, `u32` dim, `dim` × `f32`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingStore {
    vectors: BTreeMap<String, EmbeddingVector>,
}

impl EmbeddingStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, text: impl Into<String>, vector: EmbeddingVector) -> Result<()> {
        if let Some(dim) = self.dim() {
            if vector.dim() != dim {
                return Err(Error::Consistency(format!("store holds dim {dim}, got dim {}", vector.dim())));
            }
        }
        self.vectors.insert(text.into(), vector);
        Ok(())
    }

    pub fn get(&self, text: &str) -> Option<&EmbeddingVector> {
        self.vectors.get(text)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.values().next().map(EmbeddingVector::dim)
    }

    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Self> {
        let lines: Vec<StoreLine> = read_jsonl(reader)?;
        let mut store = Self::new();
        for l in lines {
            if l.dim != l.vector.dim() {
                return Err(Error::Validation(format!(
                    "embedding for {:?} declares dim {} but has {} values",
                    l.text,
                    l.dim,
                    l.vector.dim()
                )));
            }
            store.insert(l.text, l.vector)?;
        }
        Ok(store)
    }

    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> Result<()> {
        for (text, vector) in &self.vectors {
            let line = StoreLine { text: text.clone(), dim: vector.dim(), vector: vector.clone() };
            let mut s = serde_json::to_string(&line)?;
            s.push('\n');
            writer.write_all(s.as_bytes()).map_err(|e| Error::io("writing embedding store", e))?;
        }
        writer.flush().map_err(|e| Error::io("writing embedding store", e))
    }

    pub fn read_binary<R: Read>(mut reader: R) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes).map_err(|e| Error::io("reading embedding store", e))?;
        let mut cur = Cursor { bytes: &bytes, pos: 0 };
        if cur.take(4)? != BINARY_MAGIC {
            return Err(Error::Validation("embedding store does not start with EMB1".into()));
        }
        let count = cur.u32()?;
        let mut store = Self::new();
        for _ in 0..count {
            let len = cur.u32()? as usize;
            let text = std::str::from_utf8(cur.take(len)?)
                .map_err(|_| Error::Validation("embedding text is not UTF-8".into()))?
                .to_string();
            let dim = cur.u32()? as usize;
            let raw = cur.take(dim * 4)?;
            let values = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
                .collect();
            store.insert(text, EmbeddingVector::new(values)?)?;
        }
        if cur.pos != bytes.len() {
            return Err(Error::Validation(format!("{} trailing bytes after embedding records", bytes.len() - cur.pos)));
        }
        Ok(store)
    }

    /// Values are narrowed to `f32`.
    pub fn write_binary<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(BINARY_MAGIC);
        buf.extend_from_slice(&to_u32(self.vectors.len())?.to_le_bytes());
        for (text, vector) in &self.vectors {
            buf.extend_from_slice(&to_u32(text.len())?.to_le_bytes());
            buf.extend_from_slice(text.as_bytes());
            buf.extend_from_slice(&to_u32(vector.dim())?.to_le_bytes());
            for &v in vector.values() {
                buf.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        writer
            .write_all(&buf)
            .and_then(|_| writer.flush())
            .map_err(|e| Error::io("writing embedding store", e))
    }
}

fn to_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Domain(format!("{n} does not fit the binary store's u32 fields")))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            Error::Validation(format!("embedding store truncated at byte {}", self.pos))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}
