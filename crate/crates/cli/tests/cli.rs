//! End-to-end tests of the blaschke-dyn binary: artifact round-trips,
//! determinism, and the documented exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blaschke-dyn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn cheby_emits_three_real_zeros() {
    let out = run(&["cheby", "--n", "3", "--t", "0.4"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "blaschke-dyn/1");
    let zeros = doc["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 3);
    for z in zeros {
        assert!(z["im"].as_f64().unwrap().abs() < 1e-9, "zero not real: {z}");
    }
    // field order contract: rho precedes zeros in the serialized text
    let text = stdout(&out);
    assert!(text.find("\"rho\"").unwrap() < text.find("\"zeros\"").unwrap());
}

#[test]
fn emitted_products_reparse_and_compose() {
    let dir = std::env::temp_dir();
    let t6 = dir.join("cli_test_t6.json");
    let t6s = t6.to_str().unwrap();
    let out = run(&["cheby", "--n", "6", "--t", "0.5", "--out", t6s]);
    assert!(out.status.success());
    // the emitted document is consumable by compose (round-trip through the
    // type invariants) and by decompose/monodromy
    let out = run(&["compose", "--outer", t6s, "--inner", t6s]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["zeros"].as_array().unwrap().len(), 36);

    let out = run(&["decompose", "--input", t6s]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["kind"], "factors");

    let out = run(&["monodromy", "--input", t6s]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["degree"], 6);
    assert_eq!(doc["transitive"], true);
    assert_eq!(doc["block_systems"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_file(t6);
}

#[test]
fn deterministic_output_for_identical_config() {
    let a = run(&["cheby", "--n", "5", "--t", "0.3"]);
    let b = run(&["cheby", "--n", "5", "--t", "0.3"]);
    assert_eq!(a.stdout, b.stdout, "byte-identical artifacts");
    let a = run(&["verify", "--suite", "ritt", "--seed", "7"]);
    let b = run(&["verify", "--suite", "ritt", "--seed", "7"]);
    assert_eq!(
        a.stdout, b.stdout,
        "byte-identical verify table for one seed"
    );
}

#[test]
fn exact_dynamics_commands() {
    let out = run(&["height", "--map", "z^2", "--point", "1/2", "--steps", "6"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let est = doc["canonical_estimate"].as_f64().unwrap();
    assert!((est - std::f64::consts::LN_2).abs() < 1e-12);

    let out = run(&["orbit", "--map", "z^2", "--point", "i", "--steps", "4"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["points"][1], "-1");
    assert_eq!(doc["cycle_period"], 1);

    let out = run(&[
        "intersect",
        "--map-f",
        "z^2",
        "--point-x",
        "1/2",
        "--map-g",
        "z^4",
        "--point-y",
        "1/2",
        "--steps",
        "10",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let hits = doc["hits"].as_array().unwrap();
    assert_eq!(hits.len(), 6);
    assert_eq!(hits[1]["i"], 2);
    assert_eq!(hits[1]["j"], 1);
}

#[test]
fn exact_map_files_support_conjugated_chains() {
    let dir = std::env::temp_dir();
    let path = dir.join("cli_test_conj.json");
    std::fs::write(
        &path,
        r#"{
  "schema": "blaschke-dyn/1",
  "factors": [
    {"rho": "1", "zeros": ["-1/2"]},
    {"rho": "1", "zeros": ["0", "0"]},
    {"rho": "1", "zeros": ["1/2"]}
  ]
}"#,
    )
    .unwrap();
    let out = run(&[
        "orbit",
        "--map",
        path.to_str().unwrap(),
        "--point",
        "0",
        "--steps",
        "3",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["degree"], 2);
    assert_eq!(doc["points"][1], "2/3");
    assert_eq!(doc["points"][2], "6/11");
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_passes_and_filters() {
    let out = run(&["verify"]);
    assert!(out.status.success(), "all suites pass");
    let text = stdout(&out);
    for name in [
        "normalization",
        "nesting",
        "commuting",
        "tt",
        "critvals",
        "gamma0",
        "monodromy",
        "ritt",
    ] {
        assert!(text.contains(name), "table lists {name}");
    }
    let out = run(&["verify", "--suite", "nesting", "--t", "0.5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("nesting"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // input validation: 2
    let out = run(&["cheby", "--n", "0", "--t", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["orbit", "--map", "z^2", "--point", "1/0", "--steps", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // numerical failure: 3 (growth cap on a fast-growing exact orbit)
    let out = run(&[
        "orbit",
        "--map",
        "z^3",
        "--point",
        "1/2",
        "--steps",
        "12",
        "--bit-cap",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // verification failure: 1 (force an absurd tolerance)
    let out = run(&["verify", "--suite", "nesting", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_emission_has_documented_columns() {
    let out = run(&[
        "cheby",
        "--n",
        "2",
        "--t",
        "0.5",
        "--emit",
        "csv",
        "--samples",
        "9",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,T(x)");
    assert_eq!(lines.count(), 9);
}
