//! End-to-end tests of the binary: exit codes, report contents, and
//! determinism of the machine-readable output.

use std::io::Write;
use std::process::{Command, Output};

fn callias(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_callias"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(name: &str, body: &str) -> String {
    let path =
        std::env::temp_dir().join(format!("callias-test-{name}-{}.json", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

const SINGLE_POSITIVE: &str = r#"{
  "rank": 1,
  "mode": "complete-with-boundary",
  "singularities": [{ "position": [0, 0, 0], "weights": [1] }],
  "mass": [1.0],
  "boundary_radius": 1.0
}"#;

const COMPACT_PAIR: &str = r#"{
  "rank": 1,
  "mode": "compact-model",
  "singularities": [
    { "position": [0, 0, 0], "weights": [2] },
    { "position": [1, 0, 0], "weights": [-2] }
  ]
}"#;

#[test]
fn index_of_positive_ak_is_zero() {
    let cfg = write_config("single", SINGLE_POSITIVE);
    let out = callias(&["index", "--config", &cfg, "--out", "json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["total"], 0);
    assert_eq!(v["checks"]["expressions_agree"], true);
    assert_eq!(v["checks"]["stokes_cross_check"], true);
    assert_eq!(v["command"], "index");
    assert!(v["version"].is_string());
}

#[test]
fn equivariant_pair_reports_minus_two() {
    let cfg = write_config("pair", COMPACT_PAIR);
    let out = callias(&["equivariant", "--config", &cfg, "--out", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["symbolic"], -2);
    assert_eq!(v["results"]["numeric"], "-2.000000");
}

#[test]
fn zero_mass_config_exits_two() {
    let cfg = write_config(
        "badmass",
        r#"{"rank":1,"mode":"complete-with-boundary","boundary_radius":1.0,
            "mass":[0.0],
            "singularities":[{"position":[0,0,0],"weights":[1]}]}"#,
    );
    let out = callias(&["index", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("Råde"), "{stderr}");
}

#[test]
fn malformed_and_unknown_fields_exit_two() {
    let cfg = write_config("malformed", "{not json");
    assert_eq!(callias(&["index", "--config", &cfg]).status.code(), Some(2));
    let cfg = write_config(
        "unknown",
        r#"{"rank":1,"mode":"compact-model","singularities":[],"bogus":true}"#,
    );
    assert_eq!(callias(&["index", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn missing_config_exits_two() {
    assert_eq!(callias(&["index"]).status.code(), Some(2));
}

#[test]
fn machine_output_is_deterministic() {
    let cfg = write_config("det", SINGLE_POSITIVE);
    let args = [
        "radial-index",
        "--config",
        &cfg,
        "--qmax",
        "3",
        "--seed",
        "11",
        "--out",
        "json",
    ];
    let a = callias(&args);
    let b = callias(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unattainable_shooting_margin_exits_three() {
    let cfg = write_config("tight", SINGLE_POSITIVE);
    let out = callias(&[
        "radial-index",
        "--config",
        &cfg,
        "--qmax",
        "2",
        "--tol",
        "0.0000001",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("indeterminacy"), "{stderr}");
}

#[test]
fn chern_reports_split_and_degrees() {
    let cfg = write_config("chern", SINGLE_POSITIVE);
    let out = callias(&["chern", "--config", &cfg, "--out", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["outward_degrees"][0]["outward_degree"], 1);
    assert_eq!(v["results"]["boundary_integral_plus"], -1);
    assert_eq!(v["checks"]["split_additivity"], true);
}

#[test]
fn spectrum_matches_analytic_levels() {
    let cfg = write_config("spec", SINGLE_POSITIVE);
    let out = callias(&[
        "spectrum", "--config", &cfg, "--qmax", "2", "--grid", "128", "--out", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["all_levels_matched"], true);
    assert_eq!(v["results"]["components"][0]["zero_modes"][0], 1);
}

#[test]
fn hopf_verify_passes_all_checks() {
    let out = callias(&["hopf-verify", "--k", "1", "--samples", "2", "--out", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for (name, val) in v["checks"].as_object().unwrap() {
        assert_eq!(val, &serde_json::Value::Bool(true), "{name}");
    }
}

#[test]
fn selftest_runs_the_battery() {
    let out = callias(&["selftest", "--out", "json"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(out.status.success(), "{stderr}");
    // the per-criterion progress lines go to stderr; the record to stdout
    assert_eq!(stderr.matches(" PASS ").count(), 10, "{stderr}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["all_passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 10);
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["passed"] == true));
}
