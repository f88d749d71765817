//! The nine pipeline stages. Each reads only artifacts of earlier stages
//! and writes only below its own directory.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{SecondsFormat, Utc};
use termbench_core::eval::Phase;
use termbench_core::Direction;

use crate::config::RunConfig;
use crate::error::{io, CliError};
use crate::layout::{require, RunLayout};
use crate::manifest::{sha256_hex, write_atomic, RunManifest, StageRecord};

mod classify;
mod eval;
mod ingest;
mod lexicalize;
mod popularity;
mod prompts;
mod report;
mod sample;
mod stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Popularity,
    Sample,
    Prompts,
    Eval,
    Classify,
    Lexicalize,
    Stats,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Ingest,
        Stage::Popularity,
        Stage::Sample,
        Stage::Prompts,
        Stage::Eval,
        Stage::Classify,
        Stage::Lexicalize,
        Stage::Stats,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Popularity => "popularity",
            Stage::Sample => "sample",
            Stage::Prompts => "prompts",
            Stage::Eval => "eval",
            Stage::Classify => "classify",
            Stage::Lexicalize => "lexicalize",
            Stage::Stats => "stats",
            Stage::Report => "report",
        }
    }

    /// Artifacts of earlier stages this stage reads.
    pub fn inputs(self, cfg: &RunConfig, layout: &RunLayout) -> Vec<(PathBuf, Stage)> {
        required_inputs(self, cfg, layout)
    }

    fn describe(self) -> &'static str {
        match self {
            Stage::Ingest => "parse terminology sources into term records",
            Stage::Popularity => "collect PMC and annotation counts, rank identifiers",
            Stage::Sample => "stratify by popularity, draw training pairs, split",
            Stage::Prompts => "render prompts and fine-tuning files",
            Stage::Eval => "score baseline and fine-tuned models",
            Stage::Classify => "classify baseline to fine-tuned transitions",
            Stage::Lexicalize => "embedding alignment, PCA and paired distances",
            Stage::Stats => "ANOVA and Games-Howell over popularity proxies",
            Stage::Report => "emit report tables",
        }
    }
}

fn required_inputs(stage: Stage, cfg: &RunConfig, layout: &RunLayout) -> Vec<(PathBuf, Stage)> {
    let ts = cfg.inputs.terminologies();
    let mut v = Vec::new();
    let eval_outputs = |v: &mut Vec<(PathBuf, Stage)>, phases: &[Phase], dirs: &[Direction]| {
        for &p in phases {
            for &t in &ts {
                for &d in dirs {
                    v.push((layout.eval_summary(p, t, d), Stage::Eval));
                    v.push((layout.eval_results(p, t, d), Stage::Eval));
                }
            }
        }
    };
    match stage {
        Stage::Ingest => {}
        Stage::Popularity => v.extend(ts.iter().map(|&t| (layout.records(t), Stage::Ingest))),
        Stage::Sample => {
            for &t in &ts {
                v.push((layout.records(t), Stage::Ingest));
                v.push((layout.popularity(t), Stage::Popularity));
            }
        }
        Stage::Prompts | Stage::Lexicalize => v.push((layout.split(), Stage::Sample)),
        Stage::Eval => v.push((layout.prompts(), Stage::Prompts)),
        Stage::Classify => {
            v.push((layout.split(), Stage::Sample));
            eval_outputs(&mut v, &[Phase::Baseline, Phase::FineTuned], &Direction::ALL);
        }
        Stage::Stats => {
            v.extend(ts.iter().map(|&t| (layout.popularity(t), Stage::Popularity)));
            v.push((layout.split(), Stage::Sample));
            eval_outputs(&mut v, &[cfg.stats.correctness_phase], &[cfg.stats.correctness_direction]);
        }
        Stage::Report => v.push((layout.outcomes(), Stage::Classify)),
    }
    v
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

/// Shared state for one stage execution.
pub struct StageContext<'a> {
    pub cfg: &'a RunConfig,
    pub layout: &'a RunLayout,
    pub manifest: &'a mut RunManifest,
    pub runtime: &'a tokio::runtime::Runtime,
    stage: Stage,
    outputs: BTreeMap<String, String>,
    details: serde_json::Map<String, serde_json::Value>,
}

impl<'a> StageContext<'a> {
    /// Writes a stage output atomically and records its digest.
    pub fn emit(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        debug_assert!(path.starts_with(self.layout.stage_dir(self.stage)), "{} outside stage dir", path.display());
        write_atomic(path, bytes)?;
        self.outputs.insert(self.layout.relative(path), sha256_hex(bytes));
        Ok(())
    }

    /// Records a file written by other means (e.g. an append-only cache).
    pub fn track(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = std::fs::read(path).map_err(io(format!("reading {}", path.display())))?;
        self.outputs.insert(self.layout.relative(path), sha256_hex(&bytes));
        Ok(())
    }

    pub fn detail(&mut self, key: &str, value: impl serde::Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or_default());
    }

    pub fn stage_dir(&self) -> PathBuf {
        self.layout.stage_dir(self.stage)
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(io(format!("opening {}", path.display())))
}

/// Serializes through `f` into memory.
pub fn render<F>(f: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), CliError>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

pub fn pretty_json(value: &impl serde::Serialize) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(termbench_core::Error::from)?;
    v.push(b'\n');
    Ok(v)
}

pub fn run_stage(
    stage: Stage,
    cfg: &RunConfig,
    layout: &RunLayout,
    manifest: &mut RunManifest,
    runtime: &tokio::runtime::Runtime,
) -> Result<(), CliError> {
    for (path, producer) in stage.inputs(cfg, layout) {
        require(&path, producer)?;
    }
    log::info!("stage {stage}: {}", stage.describe());
    let mut ctx = StageContext {
        cfg,
        layout,
        manifest,
        runtime,
        stage,
        outputs: BTreeMap::new(),
        details: serde_json::Map::new(),
    };
    match stage {
        Stage::Ingest => ingest::run(&mut ctx)?,
        Stage::Popularity => popularity::run(&mut ctx)?,
        Stage::Sample => sample::run(&mut ctx)?,
        Stage::Prompts => prompts::run(&mut ctx)?,
        Stage::Eval => eval::run(&mut ctx)?,
        Stage::Classify => classify::run(&mut ctx)?,
        Stage::Lexicalize => lexicalize::run(&mut ctx)?,
        Stage::Stats => stats::run(&mut ctx)?,
        Stage::Report => report::run(&mut ctx)?,
    }
    let StageContext { outputs, details, manifest, .. } = ctx;
    manifest.stages.insert(
        stage.name().to_string(),
        StageRecord {
            completed_at: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            outputs,
            details: if details.is_empty() { serde_json::Value::Null } else { serde_json::Value::Object(details) },
        },
    );
    manifest.save(layout.root())
}

/// Prints what `stage` would read and write, touching nothing.
pub fn plan(stage: Stage, cfg: &RunConfig, layout: &RunLayout, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "[{stage}] {}", stage.describe())?;
    if stage == Stage::Ingest {
        for t in cfg.inputs.terminologies() {
            if let Some(src) = cfg.inputs.source(t) {
                writeln!(out, "  read  {} ({})", src.display(), t.code())?;
            }
        }
    }
    for (path, producer) in stage.inputs(cfg, layout) {
        let mark = if path.is_file() { "" } else { " (missing; produced by `" };
        let tail = if path.is_file() { String::new() } else { format!("{producer}`)") };
        writeln!(out, "  read  {}{mark}{tail}", path.display())?;
    }
    writeln!(out, "  write {}/", layout.stage_dir(stage).display())?;
    Ok(())
}
