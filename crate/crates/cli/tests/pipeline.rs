use std::path::{Path, PathBuf};

fn fixture_config() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini/config.toml").to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("termbench").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = termbench_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn sample_into(dir: &Path) -> Vec<u8> {
    let cfg = fixture_config();
    let rd = dir.to_string_lossy().into_owned();
    for stage in ["ingest", "popularity", "sample"] {
        let (code, out, err) = run(&["--config", &cfg, "--run-dir", &rd, "--stage", stage, "--seed", "42"]);
        assert_eq!(code, 0, "{stage}: {out}{err}");
    }
    std::fs::read(dir.join("sample/split.jsonl")).unwrap()
}

#[test]
fn sample_is_reproducible_across_run_dirs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = sample_into(&tmp.path().join("a"));
    let b = sample_into(&tmp.path().join("b"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn seed_changes_the_draw() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("r");
    let first = sample_into(&dir);
    let cfg = fixture_config();
    let rd = dir.to_string_lossy().into_owned();
    let (code, _, err) = run(&["--config", &cfg, "--run-dir", &rd, "--stage", "sample", "--seed", "43"]);
    assert_eq!(code, 0, "{err}");
    assert_ne!(first, std::fs::read(dir.join("sample/split.jsonl")).unwrap());
}

#[test]
fn full_run_records_every_stage() {
    let tmp = tempfile::tempdir().unwrap();
    let rd = tmp.path().join("run");
    let (code, out, err) = run(&["--config", &fixture_config(), "--run-dir", &rd.to_string_lossy()]);
    assert_eq!(code, 0, "{out}{err}");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(rd.join("manifest.json")).unwrap()).unwrap();
    for stage in ["ingest", "popularity", "sample", "prompts", "eval", "classify", "lexicalize", "stats", "report"] {
        assert!(manifest["stages"][stage]["completed_at"].is_string(), "{stage} missing from manifest");
        assert!(out.contains(&format!("{stage}: done")));
    }
    assert_eq!(manifest["seeds"]["sampling"], 42);
}
