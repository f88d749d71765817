//! OBO 1.2/1.4 flat-file reader.
//!
//! Only `[Term]` stanzas are turned into records; `[Typedef]` and
//! `[Instance]` stanzas are skipped. Obsolete terms are excluded and
//! `alt_id:` lines are ignored.

use std::io::Read;

use crate::jsonl::decode_utf8;
use crate::{Error, Result, TermRecord, Terminology};

/// Parsed OBO file: header tags of interest plus the live term records.
#[derive(Debug, Clone, PartialEq)]
pub struct OboDocument {
    pub format_version: Option<String>,
    /// The `data-version:` header, which identifies the ontology release.
    pub data_version: Option<String>,
    pub records: Vec<TermRecord>,
}

/// Parses an OBO stream whose terms all belong to `terminology`.
pub fn parse_obo<R: Read>(reader: R, terminology: Terminology) -> Result<Vec<TermRecord>> {
    parse_obo_document(reader, terminology).map(|d| d.records)
}

pub fn parse_obo_document<R: Read>(mut reader: R, terminology: Terminology) -> Result<OboDocument> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| Error::io("reading OBO stream", e))?;
    let text = decode_utf8(&bytes)?;

    let mut doc = OboDocument { format_version: None, data_version: None, records: Vec::new() };
    let mut current: Option<Stanza> = None;
    let mut in_header = true;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            in_header = false;
            if let Some(stanza) = current.take() {
                if let Some(record) = stanza.finish(terminology)? {
                    doc.records.push(record);
                }
            }
            current = (line == "[Term]").then(|| Stanza::new(line_no));
            continue;
        }
        let Some((tag, value)) = line.split_once(':') else {
            return Err(Error::Parse { line: line_no, message: format!("expected `tag: value`, got {line:?}") });
        };
        let value = value.trim();
        if in_header {
            match tag {
                "format-version" => doc.format_version = Some(value.to_string()),
                "data-version" => doc.data_version = Some(value.to_string()),
                _ => {}
            }
            continue;
        }
        if let Some(stanza) = current.as_mut() {
            stanza.tag(tag, value, line_no)?;
        }
    }
    if let Some(stanza) = current.take() {
        if let Some(record) = stanza.finish(terminology)? {
            doc.records.push(record);
        }
    }
    Ok(doc)
}

/// Records whose namespace equals `namespace`, in input order.
pub fn filter_namespace(records: &[TermRecord], namespace: &str) -> Vec<TermRecord> {
    records.iter().filter(|r| r.namespace.as_deref() == Some(namespace)).cloned().collect()
}

struct Stanza {
    start_line: usize,
    id: Option<String>,
    name: Option<String>,
    namespace: Option<String>,
    synonyms: Vec<String>,
    obsolete: bool,
}

impl Stanza {
    fn new(start_line: usize) -> Self {
        Self { start_line, id: None, name: None, namespace: None, synonyms: Vec::new(), obsolete: false }
    }

    fn tag(&mut self, tag: &str, value: &str, line: usize) -> Result<()> {
        let single = |slot: &mut Option<String>| {
            if slot.is_some() {
                return Err(Error::Parse { line, message: format!("repeated `{tag}:` tag in [Term] stanza") });
            }
            *slot = Some(value.to_string());
            Ok(())
        };
        match tag {
            "id" => single(&mut self.id)?,
            "name" => single(&mut self.name)?,
            "namespace" => single(&mut self.namespace)?,
            "synonym" => {
                let text = quoted(value)
                    .ok_or_else(|| Error::Parse { line, message: "synonym without a quoted string".into() })?;
                self.synonyms.push(text);
            }
            "is_obsolete" => self.obsolete = value == "true",
            _ => {}
        }
        Ok(())
    }

    fn finish(self, terminology: Terminology) -> Result<Option<TermRecord>> {
        let missing = match (&self.id, &self.name) {
            (None, _) => Some("id"),
            (_, None) => Some("name"),
            _ => None,
        };
        if let Some(tag) = missing {
            return Err(Error::Parse {
                line: self.start_line,
                message: format!("[Term] stanza has no `{tag}:` tag"),
            });
        }
        if self.obsolete {
            return Ok(None);
        }
        let id = self.id.expect("checked");
        let name = self.name.expect("checked");
        TermRecord::new(terminology, id, &name, self.synonyms, self.namespace).map(Some)
    }
}

/// Removes an unquoted, unescaped `!` comment suffix.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' => escaped = true,
            '"' => in_quotes = !in_quotes,
            '!' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// The first double-quoted string in `value`, with OBO escapes resolved.
fn quoted(value: &str) -> Option<String> {
    let rest = value.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = rest.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next()? {
                'n' => out.push('\n'),
                't' => out.push('\t'),
                other => out.push(other),
            },
            '"' => return Some(out),
            other => out.push(other),
        }
    }
    None
}
