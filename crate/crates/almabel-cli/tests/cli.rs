use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_almabel")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf8 stdout"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}")))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn verdict_on_k17_example_structure() {
    let (code, v) = run_json(&["verdict", "--algebra", "k17", "--params", "p=-1/2", "--structure", "example1"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["skt"], true);
    assert_eq!(r["kahler"], false);
    assert_eq!(r["H"], "f123");
    assert_eq!(v["command"], "verdict");
    assert!(v["provenance"].as_array().unwrap().iter().any(|p| p == "catalog:k17"));
}

#[test]
fn poisson_on_k23_normal_form() {
    let (code, v) = run_json(&["poisson", "--algebra", "k23", "--params", "p=0", "--v", "1,0,0,0", "--s", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dim"], 1);
    assert_eq!(v["results"]["generator"], "Z1^Z2");
}

#[test]
fn flow_on_k17_matches_closed_form() {
    let (code, v) = run_json(&["flow", "--algebra", "k17", "--params", "p=-1/2", "--t-end", "2", "--dt", "1e-3"]);
    assert_eq!(code, 0);
    let a = v["results"]["final"]["a"].as_f64().unwrap();
    assert!((a - 0.5).abs() <= 1e-8, "a(2) = {a}");
    assert_eq!(v["results"]["closed_form"]["within_tolerance"], true);
    assert_eq!(v["exactness"]["mode"], "numeric");
}

#[test]
fn flow_writes_csv() {
    let path = scratch("k17_flow.csv");
    let p = path.to_str().unwrap();
    let (code, _) = run_json(&["flow", "--algebra", "k17", "--params", "p=-1/2", "--t-end", "1", "--dt", "1e-2", "--csv", p]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,"));
    assert_eq!(lines.count(), 101);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["verdict", "--algebra", "k8^{p,-p/2,-p/2}", "--params", "p=3/2", "--structure", "gk"][..],
        &["gk-search", "--algebra", "k23", "--params", "p=0", "--v", "0,0,0,1", "--s", "1", "--budget", "20"][..],
        &["manifest"][..],
    ] {
        let (c1, first) = run(args);
        let (c2, second) = run(args);
        assert_eq!(c1, 0, "{args:?}: {first}");
        assert_eq!(c2, 0);
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn json_in_matches_flags() {
    let path = scratch("verdict_request.json");
    std::fs::write(
        &path,
        r#"{"command": "verdict", "algebra": "k17", "params": {"p": "-1/2"}, "structure": "example1"}"#,
    )
    .unwrap();
    let (code, from_file) = run(&["--json-in", path.to_str().unwrap()]);
    let (_, from_flags) = run(&["verdict", "--algebra", "k17", "--params", "p=-1/2", "--structure", "example1"]);
    assert_eq!(code, 0);
    assert_eq!(from_file, from_flags);
}

#[test]
fn json_in_rejects_unknown_fields() {
    let path = scratch("bad_request.json");
    std::fs::write(&path, r#"{"command": "build", "algebra": "k17", "colour": "red"}"#).unwrap();
    let (code, v) = run_json(&["--json-in", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "malformed_request");
}

fn expect_error(args: &[&str], kind: &str) {
    let (code, v) = run_json(args);
    assert_eq!(code, 1, "{args:?}");
    assert_eq!(v["error"]["kind"], kind, "{args:?}: {v}");
    assert_eq!(v["error"]["exit_code"], 1);
}

#[test]
fn validation_errors_exit_one() {
    expect_error(&["build", "--algebra", "k99"], "unknown_algebra");
    expect_error(&["build", "--algebra", "k17"], "missing_parameter");
    expect_error(&["build", "--algebra", "k17", "--params", "p=0.5"], "malformed_rational");
    expect_error(&["build", "--algebra", "k17", "--params", "p"], "malformed_params");
    expect_error(&["build", "--algebra", "k17^{-1/2}", "--params", "p=1"], "unexpected_parameter");
    expect_error(&["verdict", "--algebra", "k17", "--params", "p=-1/2", "--structure", "Jf1=f6"], "malformed_structure");
    expect_error(&["build", "--algebra", "k8^{p,-p/2,-p/2}", "--params", "p=0"], "constraint_violation");
    expect_error(&["verdict", "--bogus"], "usage");
    expect_error(&[], "missing_command");
}

#[test]
fn help_exits_zero() {
    let (code, text) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["verdict", "poisson", "gk-verify", "gk-search", "flow", "reproduce-tables", "recognize"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn gk_verify_reports_split_structure() {
    let (code, v) = run_json(&["gk-verify", "--algebra", "k11", "--params", "p=1,q=-1/2,r=0,s=1/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["valid"], true);
    assert_eq!(v["results"]["split"], true);
}

#[test]
fn recognize_finds_the_built_family() {
    let (code, v) = run_json(&["recognize", "--equations", "(f^{16},-1/2f^{26},-1/2f^{36},0,0,0)"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["results"]["candidates"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"k17^{-1/2}"), "{names:?}");
}
