//! Run configuration.
//!
//! The file is TOML with the sections below; every key is optional unless
//! a stage needs it. Relative paths resolve against the directory holding
//! the config file. Credentials are never read from the file, only from
//! the environment (`TERMBENCH_COMPLETION_API_KEY`,
//! `TERMBENCH_EMBEDDING_API_KEY`, `NCBI_API_KEY`).
//!
//! ```toml
//! [run]
//! run_dir = "run"
//! seed = 42
//! n_bins = 20
//! per_bin = 10
//! validation_cap = 500      # omit for the full validation split
//! validation_seed = 7
//! concurrency = 4
//!
//! [inputs]
//! hpo_obo = "hp.obo"
//! go_obo = "go-basic.obo"
//! go_namespace = "cellular_component"
//! gene_map = "genes.tsv"
//! hpo_annotations = "hpo_annotations.tsv"
//!
//! [popularity]
//! endpoint = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esearch.fcgi"
//! cache_seed = "pmc_cache.jsonl"
//! offline = false
//! ranking_proxy = "id_count_pmc"
//!
//! [finetune]
//! base_model = "meta-llama/Meta-Llama-3.1-8B-Instruct"
//!
//! [eval]
//! endpoint = "https://api.example.org/v1/chat/completions"
//! baseline_model = "base"
//! finetuned_model = "ft"    # or per terminology under [eval.finetuned_models]
//! baseline_transcript = "baseline.jsonl"   # replay instead of HTTP
//! extract_mode = false
//! all_templates = false
//!
//! [lexicalize]
//! store = "embeddings.jsonl"
//!
//! [stats]
//! correctness_phase = "FineTuned"
//! correctness_direction = "TermToId"
//!
//! [report.reported_accuracy]
//! "GENE/IdToTerm" = 70.5
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use termbench_core::dataset::{DEFAULT_N_BINS, DEFAULT_PER_BIN};
use termbench_core::eval::{Phase, DEFAULT_MAX_TOKENS};
use termbench_core::popularity::{Proxy, DEFAULT_ESEARCH_URL};
use termbench_core::{Direction, Terminology};

use crate::error::CliError;

pub const DEFAULT_BASE_MODEL: &str = "meta-llama/Meta-Llama-3.1-8B-Instruct";
pub const COMPLETION_KEY_VAR: &str = "TERMBENCH_COMPLETION_API_KEY";
pub const EMBEDDING_KEY_VAR: &str = "TERMBENCH_EMBEDDING_API_KEY";
pub const NCBI_KEY_VAR: &str = "NCBI_API_KEY";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub run: RunSection,
    pub inputs: InputSection,
    pub popularity: PopularitySection,
    pub finetune: FinetuneSection,
    pub eval: EvalSection,
    pub lexicalize: LexicalizeSection,
    pub stats: StatsSection,
    pub report: ReportSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub run_dir: Option<PathBuf>,
    pub seed: u64,
    pub n_bins: usize,
    pub per_bin: usize,
    pub validation_cap: Option<usize>,
    pub validation_seed: u64,
    pub concurrency: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            run_dir: None,
            seed: 42,
            n_bins: DEFAULT_N_BINS,
            per_bin: DEFAULT_PER_BIN,
            validation_cap: None,
            validation_seed: 7,
            concurrency: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputSection {
    pub hpo_obo: Option<PathBuf>,
    pub go_obo: Option<PathBuf>,
    pub go_namespace: Option<String>,
    pub gene_map: Option<PathBuf>,
    pub hpo_annotations: Option<PathBuf>,
    pub go_annotations: Option<PathBuf>,
    pub gene_annotations: Option<PathBuf>,
}

impl Default for InputSection {
    fn default() -> Self {
        Self {
            hpo_obo: None,
            go_obo: None,
            go_namespace: Some("cellular_component".into()),
            gene_map: None,
            hpo_annotations: None,
            go_annotations: None,
            gene_annotations: None,
        }
    }
}

impl InputSection {
    /// Terminologies with a configured source, in canonical order.
    pub fn terminologies(&self) -> Vec<Terminology> {
        Terminology::ALL.into_iter().filter(|t| self.source(*t).is_some()).collect()
    }

    pub fn source(&self, t: Terminology) -> Option<&PathBuf> {
        match t {
            Terminology::Hpo => self.hpo_obo.as_ref(),
            Terminology::GoCc => self.go_obo.as_ref(),
            Terminology::Gene => self.gene_map.as_ref(),
        }
    }

    pub fn annotations(&self, t: Terminology) -> Option<&PathBuf> {
        match t {
            Terminology::Hpo => self.hpo_annotations.as_ref(),
            Terminology::GoCc => self.go_annotations.as_ref(),
            Terminology::Gene => self.gene_annotations.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PopularitySection {
    pub endpoint: String,
    pub cache_seed: Option<PathBuf>,
    pub offline: bool,
    pub ranking_proxy: Proxy,
    pub timeout_secs: u64,
}

impl Default for PopularitySection {
    fn default() -> Self {
        Self {
            endpoint: DEFAULT_ESEARCH_URL.into(),
            cache_seed: None,
            offline: false,
            ranking_proxy: Proxy::IdCountPmc,
            timeout_secs: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FinetuneSection {
    pub base_model: String,
}

impl Default for FinetuneSection {
    fn default() -> Self {
        Self { base_model: DEFAULT_BASE_MODEL.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSection {
    pub endpoint: Option<String>,
    pub baseline_model: Option<String>,
    pub finetuned_model: Option<String>,
    /// Per-terminology override keyed by terminology code.
    pub finetuned_models: BTreeMap<String, String>,
    pub baseline_transcript: Option<PathBuf>,
    pub finetuned_transcript: Option<PathBuf>,
    pub extract_mode: bool,
    pub all_templates: bool,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_secs: u64,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self {
            endpoint: None,
            baseline_model: None,
            finetuned_model: None,
            finetuned_models: BTreeMap::new(),
            baseline_transcript: None,
            finetuned_transcript: None,
            extract_mode: false,
            all_templates: false,
            temperature: 0.0,
            max_tokens: DEFAULT_MAX_TOKENS,
            timeout_secs: 60,
        }
    }
}

impl EvalSection {
    pub fn model_for(&self, phase: Phase, t: Terminology) -> Option<&str> {
        match phase {
            Phase::Baseline => self.baseline_model.as_deref(),
            Phase::FineTuned => self
                .finetuned_models
                .get(t.code())
                .map(String::as_str)
                .or(self.finetuned_model.as_deref()),
        }
    }

    pub fn transcript(&self, phase: Phase) -> Option<&PathBuf> {
        match phase {
            Phase::Baseline => self.baseline_transcript.as_ref(),
            Phase::FineTuned => self.finetuned_transcript.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct LexicalizeSection {
    /// JSONL or `EMB1` binary store, detected by content.
    pub store: Option<PathBuf>,
    pub endpoint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsSection {
    pub correctness_phase: Phase,
    pub correctness_direction: Direction,
}

impl Default for StatsSection {
    fn default() -> Self {
        Self { correctness_phase: Phase::FineTuned, correctness_direction: Direction::TermToId }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    /// Externally reported accuracy per `"TERMINOLOGY/Direction"`, checked
    /// against the formula value.
    pub reported_accuracy: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads the file and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading config {}", path.display()), e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.run.run_dir);
        fix(&mut self.inputs.hpo_obo);
        fix(&mut self.inputs.go_obo);
        fix(&mut self.inputs.gene_map);
        fix(&mut self.inputs.hpo_annotations);
        fix(&mut self.inputs.go_annotations);
        fix(&mut self.inputs.gene_annotations);
        fix(&mut self.popularity.cache_seed);
        fix(&mut self.eval.baseline_transcript);
        fix(&mut self.eval.finetuned_transcript);
        fix(&mut self.lexicalize.store);
    }

    /// Every configured input path, labelled by its key.
    pub fn input_paths(&self) -> Vec<(&'static str, &PathBuf)> {
        let i = &self.inputs;
        [
            ("inputs.hpo_obo", i.hpo_obo.as_ref()),
            ("inputs.go_obo", i.go_obo.as_ref()),
            ("inputs.gene_map", i.gene_map.as_ref()),
            ("inputs.hpo_annotations", i.hpo_annotations.as_ref()),
            ("inputs.go_annotations", i.go_annotations.as_ref()),
            ("inputs.gene_annotations", i.gene_annotations.as_ref()),
            ("popularity.cache_seed", self.popularity.cache_seed.as_ref()),
            ("eval.baseline_transcript", self.eval.baseline_transcript.as_ref()),
            ("eval.finetuned_transcript", self.eval.finetuned_transcript.as_ref()),
            ("lexicalize.store", self.lexicalize.store.as_ref()),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.map(|p| (k, p)))
        .collect()
    }

    pub fn check_inputs_exist(&self) -> Result<(), CliError> {
        for (key, path) in self.input_paths() {
            if !path.is_file() {
                return Err(CliError::Config(format!("{key} = {} does not exist", path.display())));
            }
        }
        Ok(())
    }
}

pub fn env_secret(var: &str) -> Option<String> {
    std::env::var(var).ok().filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml("").unwrap();
        assert_eq!(c.run.seed, 42);
        assert_eq!(c.run.n_bins, 20);
        assert_eq!(c.finetune.base_model, DEFAULT_BASE_MODEL);
        assert_eq!(c.eval.max_tokens, 32);
        assert!(c.inputs.terminologies().is_empty());
    }

    #[test]
    fn relative_paths_follow_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "[inputs]\nhpo_obo = \"data/hp.obo\"\n[run]\nrun_dir = \"/abs/run\"\n").unwrap();
        let c = RunConfig::load(&p).unwrap();
        assert_eq!(c.inputs.hpo_obo.unwrap(), dir.path().join("data/hp.obo"));
        assert_eq!(c.run.run_dir.unwrap(), PathBuf::from("/abs/run"));
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!(RunConfig::from_toml("[eval]\napi_key = \"x\"\n"), Err(CliError::Config(_))));
    }

    #[test]
    fn finetuned_model_override() {
        let c = RunConfig::from_toml(
            "[eval]\nfinetuned_model = \"ft\"\n[eval.finetuned_models]\nGENE = \"ft-gene\"\n",
        )
        .unwrap();
        assert_eq!(c.eval.model_for(Phase::FineTuned, Terminology::Gene), Some("ft-gene"));
        assert_eq!(c.eval.model_for(Phase::FineTuned, Terminology::Hpo), Some("ft"));
    }
}
