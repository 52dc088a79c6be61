use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

/// Horizon the golden bundle was generated with.
const GOLDEN_HORIZON: &str = "1e4";
const KERNEL_START: &str = "0.7312,0.8731";

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

fn windtree(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_windtree")).arg("--out-dir").arg(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = windtree(dir, args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn same_file(dir: &Path, name: &str) {
    let got = fs::read(dir.join(name)).unwrap();
    let want = fs::read(golden().join(name)).unwrap();
    assert!(got == want, "{name} differs from the golden copy");
}

#[test]
fn missing_inputs_exit_3() {
    let dir = TempDir::new().unwrap();
    for args in [vec!["report"], vec!["kernel", "search"], vec!["kernel", "chain"], vec!["kernel", "gaps"]] {
        let out = windtree(dir.path(), &args);
        assert_eq!(code(&out), 3, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("missing artifact"));
    }
}

#[test]
fn bad_parameters_exit_2() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for args in [
        vec!["scan", "--table", "3/2,1/2", "--horizon", "10"],
        vec!["scan", "--table", "1/2", "--horizon", "10"],
        vec!["scan", "--count", "0", "--horizon", "10"],
        vec!["diffuse", "--direction", "0.3", "--start", "0.2,0.2", "--horizon", "10"],
        vec!["diffuse", "--direction", "0.3", "--start", "0.7,0.7", "--horizon", "-1"],
        vec!["rank-check", "--table", "0,1/2"],
    ] {
        let out = windtree(d, &args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }

    // wrong schema version, unknown fields, broken surface files
    fs::copy(golden().join("rep.json"), d.join("rep.json")).unwrap();
    let mut kernel: Value = serde_json::from_str(&fs::read_to_string(golden().join("kernel.json")).unwrap()).unwrap();
    kernel["version"] = Value::from(99);
    fs::write(d.join("kernel.json"), kernel.to_string()).unwrap();
    assert_eq!(code(&windtree(d, &["kernel", "gaps"])), 2);
    kernel["version"] = Value::from(1);
    kernel["colour"] = Value::from("red");
    fs::write(d.join("kernel.json"), kernel.to_string()).unwrap();
    assert_eq!(code(&windtree(d, &["kernel", "gaps"])), 2);

    fs::write(d.join("s.json"), r#"{"right":[1,0],"top":[0]}"#).unwrap();
    assert_eq!(code(&windtree(d, &["surface", "validate", d.join("s.json").to_str().unwrap()])), 2);
    fs::write(d.join("s.json"), "not json").unwrap();
    assert_eq!(code(&windtree(d, &["surface", "validate", d.join("s.json").to_str().unwrap()])), 2);
}

/// Rebuilds every stage the report reads and the report itself, and
/// compares the bytes against the stored bundle.
#[test]
fn pipeline_reproduces_the_golden_bundle() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["rep", "compute"]);
    same_file(d, "rep.json");
    ok(d, &["kernel", "search"]);
    same_file(d, "kernel.json");
    let kernel = d.join("kernel.json");
    ok(d, &["diffuse", "--kernel", kernel.to_str().unwrap(), "--horizon", GOLDEN_HORIZON, "--start", KERNEL_START]);
    same_file(d, "kernel_diffusion.json");
    same_file(d, "kernel_diffusion.csv");
    ok(d, &["scan", "--count", "16", "--horizon", GOLDEN_HORIZON]);
    same_file(d, "scan.json");
    same_file(d, "scan.csv");
    ok(d, &["rank-check"]);
    same_file(d, "rank.json");
    ok(d, &["report"]);
    same_file(d, "report.json");
    same_file(d, "report.csv");
}

#[test]
fn report_from_stored_artifacts_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["report", "--artifacts", golden().to_str().unwrap()]);
    same_file(dir.path(), "report.json");
    same_file(dir.path(), "report.csv");
}

#[test]
fn report_summarises_the_golden_runs() {
    let report: Value = serde_json::from_str(&fs::read_to_string(golden().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rank_two"], Value::Bool(true));
    assert_eq!(report["kernel_words_searched"], Value::from(160));
    let slopes = report["generic_slopes"].as_array().unwrap();
    assert_eq!(slopes.len(), 16);
    let scan: Value = serde_json::from_str(&fs::read_to_string(golden().join("scan.json")).unwrap()).unwrap();
    let corridor: f64 = scan["controls"]["corridor"]["slope"].as_str().unwrap().parse().unwrap();
    assert!((corridor - 1.0).abs() < 1e-9);
    let extent: f64 = scan["controls"]["bounded_extent"].as_str().unwrap().parse().unwrap();
    assert!(extent < 1.0);
}

fn manifest(dir: &Path, command: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("manifest_{command}.json"))).unwrap()).unwrap()
}

#[test]
fn manifests_are_stable_and_match_the_outputs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [a.path(), b.path()] {
        ok(d, &["scan", "--count", "4", "--horizon", "1e3"]);
    }
    let (ma, mb) = (manifest(a.path(), "scan"), manifest(b.path(), "scan"));
    for key in ["command", "config_digest", "seed", "tool_version", "outputs"] {
        assert_eq!(ma[key], mb[key], "{key}");
    }
    for o in ma["outputs"].as_array().unwrap() {
        let bytes = fs::read(a.path().join(o["path"].as_str().unwrap())).unwrap();
        let hex: String = Sha256::digest(&bytes).iter().map(|x| format!("{x:02x}")).collect();
        assert_eq!(o["sha256"].as_str().unwrap(), hex);
    }

    // a different seed changes the digest of the scan but not its shape
    let c = TempDir::new().unwrap();
    ok(c.path(), &["--seed", "1", "scan", "--count", "4", "--horizon", "1e3"]);
    let mc = manifest(c.path(), "scan");
    assert_eq!(mc["config_digest"], ma["config_digest"]);
    assert_ne!(mc["outputs"], ma["outputs"]);
    assert_eq!(mc["seed"], Value::from(1));
}

#[test]
fn surface_round_trip_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["surface", "build"]);
    let out = windtree(d, &["surface", "validate", d.join("surface.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let check: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(check["genus"], Value::from(5));
    assert_eq!(check["homology_rank"], Value::from(10));
}
