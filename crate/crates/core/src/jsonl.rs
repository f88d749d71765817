//! JSON Lines helpers shared by every artifact file.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

/// Strips a leading UTF-8 byte-order mark.
pub fn strip_bom(text: &str) -> &str {
    text.strip_prefix('\u{feff}').unwrap_or(text)
}

/// Decodes `bytes` as UTF-8 (tolerating a BOM).
pub fn decode_utf8(bytes: &[u8]) -> Result<&str> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::Parse { line, message: "input is not valid UTF-8".into() }
    })?;
    Ok(strip_bom(text))
}

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(reader: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("reading JSON Lines", e))?;
        let line = if idx == 0 { strip_bom(&line).to_string() } else { line };
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line)
            .map_err(|e| Error::Parse { line: idx + 1, message: e.to_string() })?;
        out.push(value);
    }
    Ok(out)
}

pub fn write_jsonl<'a, T, W, I>(mut writer: W, items: I) -> Result<usize>
where
    T: Serialize + 'a,
    W: Write,
    I: IntoIterator<Item = &'a T>,
{
    let mut n = 0;
    for item in items {
        serde_json::to_writer(&mut writer, item)?;
        writer.write_all(b"\n").map_err(|e| Error::io("writing JSON Lines", e))?;
        n += 1;
    }
    writer.flush().map_err(|e| Error::io("flushing JSON Lines", e))?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_line_of_bad_json() {
        let text = "{\"a\":1}\n\n{oops}\n";
        let err = read_jsonl::<serde_json::Value, _>(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn bom_is_tolerated() {
        let text = "\u{feff}{\"a\":1}\n";
        let v: Vec<serde_json::Value> = read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(decode_utf8(text.as_bytes()).unwrap(), "{\"a\":1}\n");
    }
}
