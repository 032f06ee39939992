use std::process::Command;

use serde_json::Value;

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../../../schemas/run_report.schema.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&schema).unwrap()
}

fn run(args: &[&str]) -> (Value, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_ghat")).args(args).output().unwrap();
    (serde_json::from_slice(&out.stdout).unwrap(), out.status.success())
}

#[test]
fn suite_reports_validate() {
    let schema = schema();
    for suite in ["words", "bs", "ends"] {
        let (report, ok) = run(&["suite", suite, "--seed", "3"]);
        if let Err(errors) = schema.validate(&report) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{suite}: {msgs:?}");
        }
        assert!(ok, "{suite} had failures");
    }
}

#[test]
fn schema_rejects_fail_without_witness() {
    let bad = serde_json::json!({
        "suite": "x", "seed": 0, "summary": { "pass": 0, "fail": 1, "unknown": 0 },
        "records": [{ "id": "a", "topic": "t", "inputs": {}, "outcome": "fail" }]
    });
    assert!(!schema().is_valid(&bad));
}

#[test]
fn unknown_suite_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_ghat")).args(["suite", "nosuch"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn subcommands_emit_json() {
    let (v, ok) =
        run(&["subgroup", "commensurable", "--group", "bs(2,3)", "--h", "x", "--k", "y^-1 x y", "--bound", "50"]);
    assert!(ok);
    assert_eq!(v["result"], "true");
    let (v, ok) = run(&["completion", "laws", "--group", "sym3", "--family", "normal-order3"]);
    assert!(ok);
    assert_eq!(v["laws"]["associativity"], "pass");
    let (v, ok) = run(&["ends", "estimate", "--group", "bs(2,3)", "--l", "x^2", "--gens", "x,y", "--radii", "2,4,6,8"]);
    assert!(ok);
    assert!(v["estimate"].as_u64().unwrap() >= 2);
    let (v, ok) = run(&["bs", "verify", "--suite", "family", "--bound", "12"]);
    assert!(ok && v["pass"] == true);
    let (v, _) = run(&["family", "check", "--group", "sym3", "--nodes", "a b a^-1 b^-1, b a; 1"]);
    assert!(v["nodes"].is_array());
    let (v, ok) = run(&["group", "thompson-f"]);
    assert!(ok && v["oracle"] == "thompson-normal-form");
}

#[test]
fn dot_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_ghat"))
        .args(["ends", "graph", "--group", "zn(2)", "--l", "u", "--radius", "2", "--dot"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"), "{text}");
}
