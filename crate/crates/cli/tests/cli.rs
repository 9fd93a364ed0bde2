use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_causet-lab"))
}

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn so2_violation_on_anti2_has_omega_screener() {
    let m = model("anti2_perf.json");
    let out = run(&["check", "--model", m.to_str().unwrap(), "--principle", "so2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["satisfied"], false);
    assert_eq!(v["violations"], 4);
    let w = &v["witnesses"][0];
    assert_eq!(w["lhs"], "1/2");
    assert_eq!(w["rhs"], "1/4");
    assert_eq!(w["screener"].as_array().unwrap().len(), 4);
    assert!(v["convention"].as_str().unwrap().contains('⊆'));
}

#[test]
fn fin_variants_hold_on_anti2() {
    let m = model("anti2_perf.json");
    for p in ["fin-so1", "fin-so2"] {
        let out = run(&["check", "--model", m.to_str().unwrap(), "--principle", p]);
        assert_eq!(out.status.code(), Some(0), "{p}");
        assert_eq!(json(&out)["satisfied"], true);
    }
}

#[test]
fn theorem_suite_passes() {
    let out = run(&["theorems", "--max-elements", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    for t in v["theorems"].as_array().unwrap() {
        assert_eq!(t["passed"], true, "{}", t["name"]);
    }
}

#[test]
fn cyclic_model_is_rejected() {
    let m = model("cyclic.json");
    let out = run(&["validate", "--model", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("cycle"), "{err}");
    assert!(err.contains("cyclic.json"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_file_names_the_file() {
    let out = run(&["check", "--model", "no/such/model.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no/such/model.json"));
}

#[test]
fn bad_values_name_the_flag() {
    let m = model("diamond.json");
    let out = run(&["check", "--model", m.to_str().unwrap(), "--principle", "so9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--principle"));

    let out = run(&["check", "--model", m.to_str().unwrap(), "--caps", "region=x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--caps"));

    let out = run(&["regions", "--model", m.to_str().unwrap(), "--a", "p", "--b", "a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--a/--b"));
}

#[test]
fn malformed_json_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"elements\": [\"x\"").unwrap();
    let out = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.json"));
}

#[test]
fn bare_causet_gets_uniform_binary_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    std::fs::write(&path, r#"{"elements": ["x", "y"], "relations": [["x", "y"]]}"#).unwrap();
    let out = run(&["fullspec", "--model", path.to_str().unwrap(), "--region", "x"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(v["is_partition"], true);
}

#[test]
fn hunt_output_is_independent_of_workers() {
    let base = ["hunt", "--max-elements", "4", "--measures", "3", "--seed", "7"];
    let one = run(&[&base[..], &["--workers", "1"]].concat());
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(1));
    assert_eq!(one.stdout, four.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    let summary = &last["summary"];
    assert_eq!(summary["witness_failures"], 0);
    assert_eq!(summary["internal_consistency_failures"], 0);
    assert_eq!(summary["findings"].as_u64().unwrap() as usize, text.lines().count() - 1);
}

#[test]
fn hunt_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("hunt.json");
    let base = ["hunt", "--max-elements", "3", "--seed", "3"];
    let plain = run(&base);
    let first = run(&[&base[..], &["--checkpoint", ck.to_str().unwrap()]].concat());
    assert!(ck.exists());
    let resumed = run(&[&base[..], &["--checkpoint", ck.to_str().unwrap(), "--resume"]].concat());
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(plain.stdout, resumed.stdout);

    let other = run(&["hunt", "--max-elements", "3", "--seed", "4", "--checkpoint", ck.to_str().unwrap(), "--resume"]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn pretty_output_is_json_and_deterministic() {
    let m = model("w_causet.json");
    let args = ["--pretty", "check", "--model", m.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().count() > 1);
    serde_json::from_str::<Value>(&text).unwrap();
}

#[test]
fn common_cause_search_on_anti2() {
    let m = model("anti2_perf.json");
    let out = run(&["ccs", "--model", m.to_str().unwrap(), "--a", "x=1", "--b", "y=1", "--cause", "x=1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["correlated"], true);
    assert_eq!(v["common_cause"]["qualifies"], true);
}
