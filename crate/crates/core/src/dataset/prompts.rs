use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::split::SampledPair;
use crate::{Direction, Error, Result, Terminology};

pub const TEMPLATE_COUNT: usize = 5;

#[derive(Debug, Clone, Deserialize)]
pub struct DirectionTemplates {
    #[serde(rename = "TermToId")]
    pub term_to_id: [String; TEMPLATE_COUNT],
    #[serde(rename = "IdToTerm")]
    pub id_to_term: [String; TEMPLATE_COUNT],
}

/// Versioned template table shipped in `templates/prompt_templates.json`.
#[derive(Debug, Clone, Deserialize)]
pub struct TemplateTable {
    pub version: u32,
    pub ontology: DirectionTemplates,
    pub gene: DirectionTemplates,
}

impl TemplateTable {
    pub fn get(&self, terminology: Terminology, direction: Direction) -> &[String; TEMPLATE_COUNT] {
        let set = match terminology {
            Terminology::Gene => &self.gene,
            _ => &self.ontology,
        };
        match direction {
            Direction::TermToId => &set.term_to_id,
            Direction::IdToTerm => &set.id_to_term,
        }
    }
}

pub fn templates() -> &'static TemplateTable {
    static TABLE: OnceLock<TemplateTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        serde_json::from_str(include_str!("../../templates/prompt_templates.json"))
            .expect("bundled prompt template table is valid")
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptInstance {
    pub pair_id: String,
    pub direction: Direction,
    pub template_id: u8,
    pub prompt_text: String,
    pub expected_answer: String,
}

impl PromptInstance {
    pub fn terminology(&self) -> Result<Terminology> {
        let code = self
            .pair_id
            .split_once('/')
            .map(|(t, _)| t)
            .ok_or_else(|| Error::Validation(format!("malformed pair_id {:?}", self.pair_id)))?;
        code.parse()
    }
}

/// `"{terminology}/{identifier}"`, e.g. `HPO/HP:0001337`.
pub fn pair_id(terminology: Terminology, identifier: &str) -> String {
    format!("{}/{}", terminology.code(), identifier)
}

/// Renders the five templates for one pair and direction.
pub fn expand_prompts(pair: &SampledPair, direction: Direction) -> Vec<PromptInstance> {
    let expected = match direction {
        Direction::TermToId => &pair.identifier,
        Direction::IdToTerm => &pair.term,
    };
    templates()
        .get(pair.terminology, direction)
        .iter()
        .enumerate()
        .map(|(i, template)| PromptInstance {
            pair_id: pair_id(pair.terminology, &pair.identifier),
            direction,
            template_id: (i + 1) as u8,
            prompt_text: render(template, pair.terminology.prompt_name(), &pair.term, &pair.identifier),
            expected_answer: expected.clone(),
        })
        .collect()
}

/// Single left-to-right pass, so placeholder-like text inside a term is
/// copied verbatim rather than expanded.
fn render(template: &str, ontology: &str, term: &str, identifier: &str) -> String {
    const SLOTS: [&str; 3] = ["[ONTOLOGY]", "[TERM]", "[IDENTIFIER]"];
    let mut out = String::with_capacity(template.len() + term.len() + identifier.len());
    let mut rest = template;
    while let Some(pos) = rest.find('[') {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        match SLOTS.iter().find(|s| tail.starts_with(**s)) {
            Some(slot) => {
                out.push_str(match *slot {
                    "[ONTOLOGY]" => ontology,
                    "[TERM]" => term,
                    _ => identifier,
                });
                rest = &tail[slot.len()..];
            }
            None => {
                out.push('[');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Split;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn tremor() -> SampledPair {
        SampledPair {
            terminology: Terminology::Hpo,
            term: "tremor".into(),
            identifier: "HP:0001337".into(),
            bin_index: 0,
            split: Split::Train,
        }
    }

    #[test]
    fn forward_template_one() {
        let p = expand_prompts(&tremor(), Direction::TermToId);
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].prompt_text, "What is the HPO identifier for the HPO term tremor?");
        assert_eq!(p[0].expected_answer, "HP:0001337");
        assert_eq!(p[0].pair_id, "HPO/HP:0001337");
        assert_eq!(p.iter().map(|x| x.template_id).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn reverse_template_one() {
        let p = expand_prompts(&tremor(), Direction::IdToTerm);
        assert_eq!(p[0].prompt_text, "What is the HPO term for the HPO identifier HP:0001337?");
        assert_eq!(p[0].expected_answer, "tremor");
    }

    #[test]
    fn gene_wording() {
        let pair = SampledPair {
            terminology: Terminology::Gene,
            term: "Cellular tumor antigen p53".into(),
            identifier: "TP53".into(),
            bin_index: 0,
            split: Split::Train,
        };
        let f = expand_prompts(&pair, Direction::TermToId);
        assert_eq!(f[0].prompt_text, "What is the HGNC gene symbol for the protein name Cellular tumor antigen p53?");
        let r = expand_prompts(&pair, Direction::IdToTerm);
        assert_eq!(r[0].prompt_text, "What is the protein name for the HGNC gene symbol TP53?");
    }

    #[test]
    fn table_is_versioned_and_complete() {
        let t = templates();
        assert_eq!(t.version, 1);
        for term in Terminology::ALL {
            for dir in Direction::ALL {
                let set = t.get(term, dir);
                let needed = if dir == Direction::TermToId { "[TERM]" } else { "[IDENTIFIER]" };
                assert!(set.iter().all(|s| s.contains(needed)));
                assert_eq!(set.iter().collect::<HashSet<_>>().len(), 5);
            }
        }
    }

    #[test]
    fn term_with_placeholder_text_is_not_expanded() {
        let mut pair = tremor();
        pair.term = "odd [IDENTIFIER] name".into();
        let p = expand_prompts(&pair, Direction::TermToId);
        assert_eq!(p[0].prompt_text, "What is the HPO identifier for the HPO term odd [IDENTIFIER] name?");
    }

    proptest! {
        #[test]
        fn no_placeholder_survives(term in "[a-z ]{1,30}", digits in 0u32..9_999_999) {
            let pair = SampledPair {
                terminology: Terminology::GoCc,
                term: term.clone(),
                identifier: format!("GO:{digits:07}"),
                bin_index: 0,
                split: Split::Validation,
            };
            let mut seen = HashSet::new();
            for dir in Direction::ALL {
                for p in expand_prompts(&pair, dir) {
                    prop_assert!(!p.prompt_text.contains("[ONTOLOGY]"));
                    prop_assert!(!p.prompt_text.contains("[TERM]"));
                    prop_assert!(!p.prompt_text.contains("[IDENTIFIER]"));
                    prop_assert!(seen.insert((dir, p.template_id, p.prompt_text.clone())));
                }
            }
        }
    }
}
