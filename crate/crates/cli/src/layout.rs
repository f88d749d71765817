//! Run-directory layout. Each stage writes only below `<run>/<stage>/`.

use std::path::{Path, PathBuf};

use termbench_core::dataset::Split;
use termbench_core::eval::Phase;
use termbench_core::popularity::Proxy;
use termbench_core::{Direction, Terminology};

use crate::error::CliError;
use crate::stages::Stage;

#[derive(Debug, Clone)]
pub struct RunLayout {
    root: PathBuf,
}

impl RunLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn stage_dir(&self, stage: Stage) -> PathBuf {
        self.root.join(stage.name())
    }

    /// Path relative to the run root, with forward slashes.
    pub fn relative(&self, path: &Path) -> String {
        path.strip_prefix(&self.root)
            .unwrap_or(path)
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn records(&self, t: Terminology) -> PathBuf {
        self.stage_dir(Stage::Ingest).join(format!("records_{}.jsonl", t.code()))
    }

    pub fn popularity(&self, t: Terminology) -> PathBuf {
        self.stage_dir(Stage::Popularity).join(format!("popularity_{}.csv", t.code()))
    }

    pub fn rank_frequency(&self, t: Terminology) -> PathBuf {
        self.stage_dir(Stage::Popularity).join(format!("rank_frequency_{}.csv", t.code()))
    }

    pub fn pmc_cache(&self) -> PathBuf {
        self.stage_dir(Stage::Popularity).join("pmc_cache.jsonl")
    }

    pub fn split(&self) -> PathBuf {
        self.stage_dir(Stage::Sample).join("split.jsonl")
    }

    pub fn bins(&self) -> PathBuf {
        self.stage_dir(Stage::Sample).join("bins.csv")
    }

    pub fn prompts(&self) -> PathBuf {
        self.stage_dir(Stage::Prompts).join("prompts.jsonl")
    }

    pub fn finetune(&self, t: Terminology, d: Direction) -> PathBuf {
        self.stage_dir(Stage::Prompts).join(format!("finetune_{}_{}.jsonl", t.code(), d.code()))
    }

    pub fn finetune_manifest(&self, t: Terminology, d: Direction) -> PathBuf {
        self.stage_dir(Stage::Prompts).join(format!("finetune_{}_{}.manifest.json", t.code(), d.code()))
    }

    fn eval_stem(&self, p: Phase, t: Terminology, d: Direction) -> PathBuf {
        self.stage_dir(Stage::Eval).join(format!("{}_{}_{}", p.code(), t.code(), d.code()))
    }

    pub fn eval_results(&self, p: Phase, t: Terminology, d: Direction) -> PathBuf {
        with_suffix(self.eval_stem(p, t, d), ".results.jsonl")
    }

    pub fn eval_summary(&self, p: Phase, t: Terminology, d: Direction) -> PathBuf {
        with_suffix(self.eval_stem(p, t, d), ".summary.json")
    }

    pub fn eval_transcript(&self, p: Phase, t: Terminology, d: Direction) -> PathBuf {
        with_suffix(self.eval_stem(p, t, d), ".transcript.jsonl")
    }

    pub fn outcomes(&self) -> PathBuf {
        self.stage_dir(Stage::Classify).join("outcomes.jsonl")
    }

    pub fn metrics(&self, t: Terminology, d: Direction) -> PathBuf {
        self.stage_dir(Stage::Classify).join(format!("metrics_{}_{}.json", t.code(), d.code()))
    }

    pub fn sankey(&self, t: Terminology, d: Direction, s: Split) -> PathBuf {
        self.stage_dir(Stage::Classify).join(format!("sankey_{}_{}_{}.csv", t.code(), d.code(), s.code()))
    }

    pub fn alignment(&self, t: Terminology) -> PathBuf {
        self.stage_dir(Stage::Lexicalize).join(format!("alignment_{}.json", t.code()))
    }

    pub fn pca(&self) -> PathBuf {
        self.stage_dir(Stage::Lexicalize).join("pca.json")
    }

    pub fn pca_points(&self) -> PathBuf {
        self.stage_dir(Stage::Lexicalize).join("pca_points.csv")
    }

    pub fn distances(&self) -> PathBuf {
        self.stage_dir(Stage::Lexicalize).join("distances.csv")
    }

    pub fn observations(&self, p: Proxy) -> PathBuf {
        self.stage_dir(Stage::Stats).join(format!("observations_{}.csv", p.code()))
    }

    pub fn anova(&self, p: Proxy) -> PathBuf {
        self.stage_dir(Stage::Stats).join(format!("anova_{}.csv", p.code()))
    }

    pub fn games_howell(&self, p: Proxy) -> PathBuf {
        self.stage_dir(Stage::Stats).join(format!("games_howell_{}.csv", p.code()))
    }

    pub fn descriptives(&self) -> PathBuf {
        self.stage_dir(Stage::Stats).join("descriptives.csv")
    }

    pub fn report(&self, name: &str) -> PathBuf {
        self.stage_dir(Stage::Report).join(name)
    }
}

fn with_suffix(stem: PathBuf, suffix: &str) -> PathBuf {
    let mut s = stem.into_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// Fails with the producing stage when a prior artifact is absent.
pub fn require(path: &Path, stage: Stage) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::MissingArtifact { path: path.to_path_buf(), stage: stage.name() })
    }
}
