//! Command-line orchestration of the benchmark pipeline over a run
//! directory.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub mod args;
pub mod config;
pub mod error;
pub mod layout;
pub mod manifest;
pub mod stages;

pub use args::Args;
pub use config::RunConfig;
pub use error::CliError;
pub use layout::RunLayout;
pub use manifest::RunManifest;
pub use stages::Stage;

use manifest::digest_file;

/// Parses `argv`, runs the requested stages and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&args, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Loads the config and applies command-line overrides.
pub fn resolve_config(args: &Args) -> Result<(RunConfig, PathBuf), CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = &args.run_dir {
        cfg.run.run_dir = Some(dir.clone());
    }
    if let Some(seed) = args.seed {
        cfg.run.seed = seed;
    }
    if let Some(cap) = args.validation_cap {
        cfg.run.validation_cap = Some(cap);
    }
    if let Some(c) = args.concurrency {
        cfg.run.concurrency = c;
    }
    cfg.eval.extract_mode |= args.extract_mode;
    cfg.eval.all_templates |= args.all_templates;
    let run_dir = cfg
        .run
        .run_dir
        .clone()
        .ok_or_else(|| CliError::Config("no run directory (set run.run_dir or pass --run-dir)".into()))?;
    Ok((cfg, run_dir))
}

fn execute(args: &Args, out: &mut dyn Write) -> Result<(), CliError> {
    let (cfg, run_dir) = resolve_config(args)?;
    let layout = RunLayout::new(run_dir);
    let selected: Vec<Stage> = match args.stage {
        Some(s) => vec![s],
        None => Stage::ALL.to_vec(),
    };

    if args.dry_run {
        for &s in &selected {
            stages::plan(s, &cfg, &layout, out).map_err(error::io("writing plan"))?;
        }
        return Ok(());
    }

    cfg.check_inputs_exist()?;
    std::fs::create_dir_all(layout.root()).map_err(error::io(format!("creating {}", layout.root().display())))?;
    let mut manifest = RunManifest::load_or_default(layout.root())?;
    manifest.tool_version = env!("CARGO_PKG_VERSION").to_string();
    manifest.config = serde_json::to_value(&cfg).map_err(termbench_core::Error::from)?;
    manifest.input_digests.clear();
    for (_, path) in cfg.input_paths() {
        manifest.input_digests.insert(path.display().to_string(), digest_file(path)?);
    }

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(error::io("starting async runtime"))?;
    for s in selected {
        stages::run_stage(s, &cfg, &layout, &mut manifest, &runtime)?;
        let _ = writeln!(out, "{s}: done");
    }
    Ok(())
}
