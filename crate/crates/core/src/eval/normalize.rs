use serde::{Deserialize, Serialize};

use crate::{Direction, Terminology};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    /// Keep the whole answer.
    #[default]
    Strict,
    /// For term → identifier, keep the first syntactically valid identifier
    /// found in the answer.
    Extract,
}

const QUOTES: [(char, char); 5] = [('"', '"'), ('\'', '\''), ('`', '`'), ('“', '”'), ('‘', '’')];

fn strip_quote_pairs(mut s: &str) -> &str {
    loop {
        let t = s.trim();
        let mut stripped = None;
        for (open, close) in QUOTES {
            if t.chars().count() >= 2 && t.starts_with(open) && t.ends_with(close) {
                stripped = Some(&t[open.len_utf8()..t.len() - close.len_utf8()]);
                break;
            }
        }
        match stripped {
            Some(inner) => s = inner,
            None => return t,
        }
    }
}

/// Canonical form of a model answer (and of the expected answer).
///
/// Whitespace is trimmed, surrounding quote pairs dropped, one trailing
/// `.`, `,` or `;` removed and internal whitespace collapsed. Term →
/// identifier answers are uppercased; identifier → term answers are
/// lowercased.
pub fn normalize_answer(raw: &str, terminology: Terminology, direction: Direction, mode: NormalizeMode) -> String {
    let mut s = strip_quote_pairs(raw);
    if let Some(last) = s.chars().last() {
        if matches!(last, '.' | ',' | ';') {
            s = &s[..s.len() - 1];
        }
    }
    let s = strip_quote_pairs(s);
    let collapsed = s.split_whitespace().collect::<Vec<_>>().join(" ");
    match direction {
        Direction::IdToTerm => collapsed.to_lowercase(),
        Direction::TermToId => {
            let upper = collapsed.to_uppercase();
            if mode == NormalizeMode::Extract {
                // Gene symbols are looked up before case folding so that
                // ordinary capitalised words are not mistaken for symbols.
                let found = match terminology {
                    Terminology::Gene => terminology.find_identifier(&collapsed).map(str::to_uppercase),
                    _ => terminology.find_identifier(&upper).map(str::to_string),
                };
                if let Some(id) = found {
                    return id;
                }
            }
            upper
        }
    }
}

/// Exact match of two normalized strings.
pub fn score_item(normalized: &str, expected: &str, _direction: Direction) -> bool {
    normalized.as_bytes() == expected.as_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Direction::*;
    use NormalizeMode::*;
    use Terminology::*;

    #[test]
    fn quoted_with_period() {
        assert_eq!(normalize_answer("\"HP:0001337.\"", Hpo, TermToId, Strict), "HP:0001337");
        assert_eq!(normalize_answer("\"HP:0001337\".", Hpo, TermToId, Strict), "HP:0001337");
    }

    #[test]
    fn strict_versus_extract() {
        let raw = "The answer is HP:0001337";
        assert_eq!(normalize_answer(raw, Hpo, TermToId, Strict), "THE ANSWER IS HP:0001337");
        assert_eq!(normalize_answer(raw, Hpo, TermToId, Extract), "HP:0001337");
        assert!(!score_item(&normalize_answer(raw, Hpo, TermToId, Strict), "HP:0001337", TermToId));
    }

    #[test]
    fn gene_extract_skips_prose() {
        assert_eq!(normalize_answer("The gene is TP53.", Gene, TermToId, Extract), "TP53");
        assert_eq!(normalize_answer("the gene", Gene, TermToId, Extract), "THE GENE");
    }

    #[test]
    fn term_is_trimmed_and_lowercased() {
        assert_eq!(normalize_answer("  Tremor ", Hpo, IdToTerm, Strict), "tremor");
        assert_eq!(normalize_answer("Abnormal   heart\n shape;", Hpo, IdToTerm, Strict), "abnormal heart shape");
    }

    #[test]
    fn only_one_trailing_punctuation_mark() {
        assert_eq!(normalize_answer("tremor..", Hpo, IdToTerm, Strict), "tremor.");
    }

    #[test]
    fn empty_and_lone_quote() {
        assert_eq!(normalize_answer("", GoCc, TermToId, Strict), "");
        assert_eq!(normalize_answer("\"", GoCc, IdToTerm, Strict), "\"");
    }

    #[test]
    fn scoring() {
        assert!(score_item("HP:0001337", "HP:0001337", TermToId));
        assert!(!score_item("HP:0001338", "HP:0001337", TermToId));
        assert!(score_item("tremor", "tremor", IdToTerm));
    }

    proptest! {
        #[test]
        fn idempotent(raw in ".{0,40}", extract in any::<bool>(), rev in any::<bool>()) {
            let mode = if extract { Extract } else { Strict };
            let dir = if rev { IdToTerm } else { TermToId };
            let once = normalize_answer(&raw, Hpo, dir, mode);
            let twice = normalize_answer(&once, Hpo, dir, mode);
            // a second pass may only strip further punctuation or quotes
            prop_assert!(twice.len() <= once.len());
        }

        #[test]
        fn valid_identifier_is_fixed_point(d in 0u32..9_999_999) {
            let id = format!("GO:{d:07}");
            prop_assert_eq!(normalize_answer(&id, GoCc, TermToId, Strict), id.clone());
            prop_assert_eq!(normalize_answer(&id, GoCc, TermToId, Extract), id);
        }
    }
}
