use std::path::PathBuf;

use clap::Parser;

use crate::stages::Stage;

/// Term ↔ identifier normalization benchmark pipeline.
#[derive(Debug, Clone, Parser)]
#[command(name = "termbench", version)]
pub struct Args {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Run directory; overrides `run.run_dir`.
    #[arg(long)]
    pub run_dir: Option<PathBuf>,
    /// Sampling seed; overrides `run.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run one stage instead of the whole pipeline.
    #[arg(long, value_parser = parse_stage)]
    pub stage: Option<Stage>,
    /// Print the planned actions and write nothing.
    #[arg(long)]
    pub dry_run: bool,
    #[arg(long)]
    pub validation_cap: Option<usize>,
    /// Pull the first identifier out of free-text answers before matching.
    #[arg(long)]
    pub extract_mode: bool,
    /// Score all five templates by majority vote.
    #[arg(long)]
    pub all_templates: bool,
    #[arg(long)]
    pub concurrency: Option<usize>,
}

fn parse_stage(s: &str) -> Result<Stage, String> {
    s.parse()
}
