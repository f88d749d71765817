use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::bins::FrequencyBin;
use super::rng::SampleRng;
use crate::jsonl::{read_jsonl, write_jsonl};
use crate::{Error, Result, TermRecord, Terminology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Split {
    Train,
    Validation,
}

impl Split {
    pub const ALL: [Split; 2] = [Split::Train, Split::Validation];

    pub fn code(self) -> &'static str {
        match self {
            Split::Train => "Train",
            Split::Validation => "Validation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledPair {
    pub terminology: Terminology,
    pub term: String,
    pub identifier: String,
    pub bin_index: usize,
    pub split: Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationCap {
    pub size: usize,
    pub seed: u64,
}

/// Marks `sampled` identifiers as Train and every other record as
/// Validation. Train pairs keep the order of `sampled`; Validation pairs
/// are ordered by identifier. With a cap, Validation is subsampled
/// without replacement under the cap's own seed.
pub fn make_split(
    records: &[TermRecord],
    bins: &[FrequencyBin],
    sampled: &[(usize, String)],
    cap: Option<ValidationCap>,
) -> Result<Vec<SampledPair>> {
    let by_id: HashMap<&str, &TermRecord> = records.iter().map(|r| (r.identifier.as_str(), r)).collect();
    let bin_of: HashMap<&str, usize> = bins
        .iter()
        .flat_map(|b| b.members.iter().map(move |m| (m.as_str(), b.index)))
        .collect();

    let mut train_ids = BTreeMap::new();
    let mut out = Vec::with_capacity(records.len());
    for (bin_index, id) in sampled {
        let rec = by_id
            .get(id.as_str())
            .ok_or_else(|| Error::Consistency(format!("sampled identifier {id} is not among the records")))?;
        if train_ids.insert(id.as_str(), ()).is_some() {
            return Err(Error::Consistency(format!("identifier {id} sampled twice")));
        }
        out.push(pair(rec, *bin_index, Split::Train));
    }

    let mut validation: Vec<&TermRecord> =
        records.iter().filter(|r| !train_ids.contains_key(r.identifier.as_str())).collect();
    validation.sort_by(|a, b| a.identifier.cmp(&b.identifier));
    if let Some(cap) = cap {
        if cap.size < validation.len() {
            let mut keep = SampleRng::new(cap.seed).choose_indices(validation.len(), cap.size);
            keep.sort_unstable();
            validation = keep.into_iter().map(|i| validation[i]).collect();
        }
    }
    for rec in validation {
        let bin_index = *bin_of.get(rec.identifier.as_str()).ok_or_else(|| {
            Error::Consistency(format!("identifier {} is not assigned to any frequency bin", rec.identifier))
        })?;
        out.push(pair(rec, bin_index, Split::Validation));
    }
    Ok(out)
}

fn pair(rec: &TermRecord, bin_index: usize, split: Split) -> SampledPair {
    SampledPair {
        terminology: rec.terminology,
        term: rec.label.clone(),
        identifier: rec.identifier.clone(),
        bin_index,
        split,
    }
}

pub fn write_split<W: Write>(writer: W, pairs: &[SampledPair]) -> Result<usize> {
    write_jsonl(writer, pairs)
}

pub fn read_split<R: BufRead>(reader: R) -> Result<Vec<SampledPair>> {
    let pairs: Vec<SampledPair> = read_jsonl(reader)?;
    let mut seen = std::collections::HashSet::new();
    for p in &pairs {
        p.terminology.validate_identifier(&p.identifier)?;
        if !seen.insert((p.terminology, p.identifier.as_str())) {
            return Err(Error::Consistency(format!("{} appears twice in the split file", p.identifier)));
        }
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records(n: usize) -> Vec<TermRecord> {
        (0..n)
            .map(|i| TermRecord::new(Terminology::GoCc, format!("GO:{:07}", i + 1), &format!("term {i}"), vec![], None).unwrap())
            .collect()
    }

    fn one_bin(recs: &[TermRecord]) -> Vec<FrequencyBin> {
        vec![FrequencyBin { index: 0, members: recs.iter().map(|r| r.identifier.clone()).collect() }]
    }

    #[test]
    fn go_sized_split() {
        let recs = records(1839);
        let bins = one_bin(&recs);
        let sampled: Vec<(usize, String)> = recs[..200].iter().map(|r| (0, r.identifier.clone())).collect();
        let split = make_split(&recs, &bins, &sampled, None).unwrap();
        assert_eq!(split.iter().filter(|p| p.split == Split::Train).count(), 200);
        assert_eq!(split.iter().filter(|p| p.split == Split::Validation).count(), 1639);
    }

    #[test]
    fn nothing_sampled() {
        let recs = records(5);
        let split = make_split(&recs, &one_bin(&recs), &[], None).unwrap();
        assert!(split.iter().all(|p| p.split == Split::Validation));
    }

    #[test]
    fn cap_is_deterministic() {
        let recs = records(1839);
        let bins = one_bin(&recs);
        let sampled: Vec<(usize, String)> = recs[..200].iter().map(|r| (0, r.identifier.clone())).collect();
        let cap = Some(ValidationCap { size: 100, seed: 5 });
        let a = make_split(&recs, &bins, &sampled, cap).unwrap();
        let b = make_split(&recs, &bins, &sampled, cap).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().filter(|p| p.split == Split::Validation).count(), 100);
        let c = make_split(&recs, &bins, &sampled, Some(ValidationCap { size: 100, seed: 6 })).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unknown_sampled_identifier() {
        let recs = records(3);
        let err = make_split(&recs, &one_bin(&recs), &[(0, "GO:9999999".into())], None).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }

    #[test]
    fn split_file_round_trip() {
        let recs = records(4);
        let split = make_split(&recs, &one_bin(&recs), &[(0, recs[2].identifier.clone())], None).unwrap();
        let mut buf = Vec::new();
        write_split(&mut buf, &split).unwrap();
        let first = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            first.lines().next().unwrap(),
            r#"{"terminology":"GO_CC","term":"term 2","identifier":"GO:0000003","bin_index":0,"split":"Train"}"#
        );
        assert_eq!(read_split(buf.as_slice()).unwrap(), split);
    }
}
