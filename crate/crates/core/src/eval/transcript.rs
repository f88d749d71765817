use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::jsonl::{read_jsonl, write_jsonl};
use crate::Result;

/// Hex SHA-256 of `model_id + "\n" + prompt_text`. Decoding parameters are
/// not part of the key.
pub fn prompt_hash(model_id: &str, prompt_text: &str) -> String {
    let mut h = Sha256::new();
    h.update(model_id.as_bytes());
    h.update(b"\n");
    h.update(prompt_text.as_bytes());
    hex::encode(h.finalize())
}

/// One recorded exchange. `response` is the provider's JSON body, or
/// `{"error": "..."}` when the request failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub prompt_hash: String,
    pub request: serde_json::Value,
    pub response: serde_json::Value,
    pub timestamp: String,
}

pub fn write_transcript<W: Write>(writer: W, entries: &[TranscriptEntry]) -> Result<usize> {
    write_jsonl(writer, entries)
}

pub fn read_transcript<R: BufRead>(reader: R) -> Result<Vec<TranscriptEntry>> {
    read_jsonl(reader)
}
