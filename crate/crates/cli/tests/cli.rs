use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn etaforge(dir: &Path, args: &[&str], config: &str) -> Output {
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, config).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_etaforge"));
    cmd.args(args).arg("--config").arg(&cfg).arg("--out").arg(dir.join("out"));
    cmd.env_remove("ETAFORGE_THREADS");
    cmd.output().unwrap()
}

fn rows(dir: &Path, name: &str) -> Vec<serde_json::Value> {
    let text = std::fs::read_to_string(dir.join("out").join(name)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["rows"].as_array().unwrap().clone()
}

#[test]
fn torus_eta_has_trivial_fractional_part() {
    let dir = TempDir::new().unwrap();
    let out = etaforge(dir.path(), &["eta"], "[run]\nmodel = \"t3\"\n[twist]\ntheta = [0.0, 0.0, 0.0]\n");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(dir.path(), "eta.json");
    let frac = rows.iter().find(|r| r["check"] == "fractional_part").unwrap();
    assert_eq!(frac["lhs"], "0");
    assert_eq!(frac["pass"], true);
    assert!(rows.iter().all(|r| r["module"] == "torus-forms"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\nseed = 7\n[eta]\nthetas = [0.3, 0.7]\n";
    let path = dir.path().join("out").join("eta.json");
    assert_eq!(etaforge(dir.path(), &["eta"], cfg).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(etaforge(dir.path(), &["eta"], cfg).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["meta"]["seed"], 7);
}

#[test]
fn csv_mirrors_rows() {
    let dir = TempDir::new().unwrap();
    let out = etaforge(dir.path(), &["eta", "--format", "csv"], "[eta]\nthetas = [0.25]\n");
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("out").join("eta.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("module,check,reference,example_id,lhs,rhs,pass"));
    let rows: Vec<&str> = lines.collect();
    // one arithmetic spectrum plus two rows for each of the two jump families
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let out = etaforge(dir.path(), &["eta", "--seed", "42"], "[run]\nseed = 3\n[eta]\nthetas = [0.5]\n");
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("out").join("eta.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["seed"], 42);
    assert_eq!(v["meta"]["config"]["run"]["seed"], 42);
}

#[test]
fn failed_assertion_exits_one() {
    let dir = TempDir::new().unwrap();
    // heat extrapolation is accurate to about 1e-13, not to 1e-15
    let out = etaforge(dir.path(), &["eta"], "[tolerances]\neta_tol = 1e-15\n[eta]\nthetas = [0.1]\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL eta-functional arithmetic_closed_form"));
    let rows = rows(dir.path(), "eta.json");
    assert!(rows.iter().any(|r| r["pass"] == false));
}

#[test]
fn invalid_configurations_exit_two() {
    let dir = TempDir::new().unwrap();
    for bad in [
        "[run]\ntruncation = 8\n",
        "[run]\nmoduli = [1, 2]\n",
        "[run]\nunknown = 1\n",
        "[run\n",
        "[tolerances]\nrank_tol = 0.5\n",
    ] {
        let out = etaforge(dir.path(), &["eta"], bad);
        assert_eq!(out.status.code(), Some(2), "config {bad:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_etaforge")).args(["eta"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_etaforge"))
        .args(["index", "--config"])
        .arg(dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_must_be_positive() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_etaforge"))
        .args(["eta", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .env("ETAFORGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_etaforge"))
        .args(["eta", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .env("ETAFORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn modn_theorem_rows_agree() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\nmoduli = [2, 3]\n[modn]\noperators = 2\nperturbations = 2\n";
    let out = etaforge(dir.path(), &["modn"], cfg);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(dir.path(), "modn.json");
    let theorem: Vec<_> = rows.iter().filter(|r| r["check"] == "index_theorem").collect();
    assert_eq!(theorem.len(), 4);
    assert!(theorem.iter().all(|r| r["lhs"] == r["rhs"]));
}
