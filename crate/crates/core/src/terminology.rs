//! The three terminologies and the two mapping directions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Terminology {
    #[serde(rename = "HPO")]
    Hpo,
    #[serde(rename = "GO_CC")]
    GoCc,
    #[serde(rename = "GENE")]
    Gene,
}

impl Terminology {
    pub const ALL: [Terminology; 3] = [Terminology::Hpo, Terminology::GoCc, Terminology::Gene];

    /// Canonical code used in files: `HPO`, `GO_CC`, `GENE`.
    pub fn code(self) -> &'static str {
        match self {
            Terminology::Hpo => "HPO",
            Terminology::GoCc => "GO_CC",
            Terminology::Gene => "GENE",
        }
    }

    /// Short name used in reports and statistics tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Terminology::Hpo => "HPO",
            Terminology::GoCc => "GO",
            Terminology::Gene => "GENE",
        }
    }

    /// Name substituted for `[ONTOLOGY]` in prompt templates.
    pub fn prompt_name(self) -> &'static str {
        match self {
            Terminology::Hpo => "HPO",
            Terminology::GoCc => "GO",
            Terminology::Gene => "HGNC",
        }
    }

    /// Whether `identifier` satisfies this terminology's syntax rule.
    ///
    /// * HPO: `HP:` followed by exactly 7 decimal digits
    /// * GO_CC: `GO:` followed by exactly 7 decimal digits
    /// * GENE: `[A-Z][A-Z0-9-]*`
    pub fn is_valid_identifier(self, identifier: &str) -> bool {
        match self {
            Terminology::Hpo => prefixed_digits(identifier, "HP:"),
            Terminology::GoCc => prefixed_digits(identifier, "GO:"),
            Terminology::Gene => is_gene_symbol(identifier),
        }
    }

    pub fn validate_identifier(self, identifier: &str) -> Result<(), Error> {
        if self.is_valid_identifier(identifier) {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "{identifier:?} is not a valid {} identifier",
                self.code()
            )))
        }
    }

    /// The first substring of `text` that is a syntactically valid
    /// identifier. HPO and GO matches must not touch further digits; gene
    /// symbols are matched as whole whitespace-delimited tokens.
    pub fn find_identifier(self, text: &str) -> Option<&str> {
        match self {
            Terminology::Hpo => find_prefixed_digits(text, "HP:"),
            Terminology::GoCc => find_prefixed_digits(text, "GO:"),
            Terminology::Gene => text
                .split_whitespace()
                .map(|tok| tok.trim_matches(|c: char| !c.is_ascii_alphanumeric() && c != '-'))
                .find(|tok| is_gene_symbol(tok)),
        }
    }
}

fn prefixed_digits(s: &str, prefix: &str) -> bool {
    s.strip_prefix(prefix)
        .is_some_and(|rest| rest.len() == 7 && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn is_gene_symbol(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'A'..=b'Z'))
        && bytes.all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'-')
}

fn find_prefixed_digits<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(pos) = text[from..].find(prefix) {
        let start = from + pos;
        let digits = start + prefix.len();
        let end = digits + 7;
        let before_ok = start == 0 || !bytes[start - 1].is_ascii_alphanumeric();
        if end <= bytes.len()
            && bytes[digits..end].iter().all(u8::is_ascii_digit)
            && (end == bytes.len() || !bytes[end].is_ascii_digit())
            && before_ok
        {
            return Some(&text[start..end]);
        }
        from = start + 1;
    }
    None
}

impl fmt::Display for Terminology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Terminology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HPO" => Ok(Terminology::Hpo),
            "GO_CC" | "GO" => Ok(Terminology::GoCc),
            "GENE" => Ok(Terminology::Gene),
            other => Err(Error::Validation(format!("unknown terminology {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    TermToId,
    IdToTerm,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::TermToId, Direction::IdToTerm];

    pub fn code(self) -> &'static str {
        match self {
            Direction::TermToId => "TermToId",
            Direction::IdToTerm => "IdToTerm",
        }
    }

    /// Row label in the style of the published tables, e.g.
    /// `Term → identifier` or, for genes, `Protein → Gene`.
    pub fn label(self, terminology: Terminology) -> &'static str {
        match (terminology, self) {
            (Terminology::Gene, Direction::TermToId) => "Protein → Gene",
            (Terminology::Gene, Direction::IdToTerm) => "Gene → Protein",
            (_, Direction::TermToId) => "Term → identifier",
            (_, Direction::IdToTerm) => "identifier → Term",
        }
    }

    /// Full mapping label such as `HPO Term → identifier`.
    pub fn mapping_label(self, terminology: Terminology) -> String {
        match terminology {
            Terminology::Gene => self.label(terminology).to_string(),
            _ => format!("{} {}", terminology.display_name(), self.label(terminology)),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "TermToId" => Ok(Direction::TermToId),
            "IdToTerm" => Ok(Direction::IdToTerm),
            other => Err(Error::Validation(format!("unknown direction {other:?}"))),
        }
    }
}
