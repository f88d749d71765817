use proptest::prelude::*;
use termbench_core::ingest::{filter_namespace, parse_obo, read_records, write_records};
use termbench_core::{Error, Terminology};

#[derive(Debug, Clone)]
struct Stanza {
    id: Option<u32>,
    bad_id: bool,
    name: Option<String>,
    namespace: Option<&'static str>,
    synonyms: Vec<String>,
    obsolete: bool,
    comment: bool,
}

fn stanza() -> impl Strategy<Value = Stanza> {
    (
        prop::option::weighted(0.95, 0u32..9_999_999),
        prop::bool::weighted(0.05),
        prop::option::weighted(0.95, "[a-zA-Z][a-zA-Z0-9 ,()-]{0,24}"),
        prop::option::of(prop::sample::select(vec!["cellular_component", "molecular_function"])),
        prop::collection::vec("[a-z][a-z ]{0,12}", 0..3),
        prop::bool::weighted(0.1),
        any::<bool>(),
    )
        .prop_map(|(id, bad_id, name, namespace, synonyms, obsolete, comment)| Stanza {
            id,
            bad_id,
            name,
            namespace,
            synonyms,
            obsolete,
            comment,
        })
}

fn render(stanzas: &[Stanza]) -> String {
    let mut s = String::from("format-version: 1.2\n\n");
    for st in stanzas {
        s.push_str("[Term]\n");
        if let Some(id) = st.id {
            if st.bad_id {
                s.push_str(&format!("id: GO:{id}x\n"));
            } else {
                s.push_str(&format!("id: GO:{id:07}\n"));
            }
        }
        if let Some(name) = &st.name {
            s.push_str(&format!("name: {name}"));
            if st.comment {
                s.push_str(" ! trailing comment");
            }
            s.push('\n');
        }
        if let Some(ns) = st.namespace {
            s.push_str(&format!("namespace: {ns}\n"));
        }
        for syn in &st.synonyms {
            s.push_str(&format!("synonym: \"{syn}\" EXACT []\n"));
        }
        s.push_str("alt_id: GO:0000000\n");
        if st.obsolete {
            s.push_str("is_obsolete: true\n");
        }
        s.push('\n');
    }
    s
}

proptest! {
    #[test]
    fn parse_or_error_never_silent_drop(stanzas in prop::collection::vec(stanza(), 0..12)) {
        let text = render(&stanzas);
        // distinct ids are required by nothing in the parser, but make
        // counting unambiguous
        let ids: std::collections::HashSet<_> = stanzas.iter().filter_map(|s| s.id).collect();
        prop_assume!(ids.len() == stanzas.iter().filter(|s| s.id.is_some()).count());
        match parse_obo(text.as_bytes(), Terminology::GoCc) {
            Ok(records) => {
                // obsolete stanzas are excluded before identifier validation
                prop_assert!(stanzas
                    .iter()
                    .filter(|s| !s.obsolete)
                    .all(|s| s.id.is_some() && s.name.is_some() && !s.bad_id));
                let live = stanzas.iter().filter(|s| !s.obsolete).count();
                prop_assert_eq!(records.len(), live);
                for r in &records {
                    prop_assert!(Terminology::GoCc.is_valid_identifier(&r.identifier));
                    prop_assert!(!r.label.contains('!'));
                }
                let mut buf = Vec::new();
                write_records(&mut buf, &records).unwrap();
                prop_assert_eq!(read_records(buf.as_slice()).unwrap(), records.clone());

                let once = filter_namespace(&records, "cellular_component");
                prop_assert!(once.iter().all(|r| records.contains(r)));
                prop_assert_eq!(filter_namespace(&once, "cellular_component"), once);
            }
            Err(Error::Parse { .. }) | Err(Error::Validation(_)) => {
                prop_assert!(stanzas.iter().any(|s| s.id.is_none() || s.name.is_none() || s.bad_id));
            }
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }
}
