//! The command-line front end: exit codes, determinism and the shipped schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artin-tate"))
        .args(args)
        .env_remove("ARTIN_TATE_BUDGET_MB")
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> JSONSchema {
    let text = std::fs::read_to_string(root().join("schemas").join(name)).unwrap();
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, doc: &Value) {
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("schema violations: {msgs:#?}");
    }
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("artin-tate-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

/// One query of every kind, including a budget failure.
const EVERY_OP: &str = r#"{
  "modulus": 2,
  "group": {"degree": 2, "generators": [[2, 1]]},
  "twist": {"character": [1]},
  "seed": 7,
  "objects": {
    "one": {"tate": 0},
    "t1": {"tate": 1},
    "reg": {"weights": {"0": {"gset": {"size": 2, "generators": [[2, 1]]}, "twist": 0}}},
    "glued": {"mode": "F", "weights": {"1": {}, "0": {}}, "u": {"0": [[0, 1], [0, 0]]}}
  },
  "queries": [
    {"op": "cohomology", "degree": 1, "twist": 1},
    {"op": "cohomology", "degree": 2, "object": "reg"},
    {"op": "ext", "source": "one", "target": "t1", "degree": 1},
    {"op": "ext", "source": "glued", "target": "reg", "degree": 0},
    {"op": "cohomology", "degree": 9, "twist": 0},
    {"op": "theta", "degree": 2, "twist": 1},
    {"op": "koszul", "degree": 2},
    {"op": "tower", "degree": 1, "twist": 1, "levels": [{"group": {"degree": 1, "generators": []}, "map": []}]},
    {"op": "p-check", "corpus": "z4"},
    {"op": "p-check", "complex": {"modulus": 2, "modules": [[2], [2]], "differentials": [[[1]]]}, "depth": 1}
  ]
}"#;

#[test]
fn shipped_example_matches_problem_schema() {
    let text = std::fs::read_to_string(root().join("problems/z2_m2.json")).unwrap();
    assert_valid(
        &schema("problem.schema.json"),
        &serde_json::from_str(&text).unwrap(),
    );
    assert_valid(
        &schema("problem.schema.json"),
        &serde_json::from_str(EVERY_OP).unwrap(),
    );
}

#[test]
fn problem_schema_rejects_what_the_parser_rejects() {
    let s = schema("problem.schema.json");
    for bad in [
        r#"{"modulus": 1, "group": {"degree": 1}}"#,
        r#"{"modulus": 2, "group": {"degree": 1}, "extra": 0}"#,
        r#"{"modulus": 2, "group": {"degree": 1}, "queries": [{"op": "theta", "degree": 0}]}"#,
        r#"{"modulus": 2, "group": {"degree": 1}, "mode": "G"}"#,
    ] {
        let doc: Value = serde_json::from_str(bad).unwrap();
        assert!(!s.is_valid(&doc), "schema accepts {bad}");
        assert!(artin_tate::problem::parse_problem(bad)
            .and_then(artin_tate::problem::Problem::resolve)
            .is_err());
    }
}

#[test]
fn reports_match_report_schema_and_are_deterministic() {
    let path = temp_file("every-op.json", EVERY_OP);
    let first = cli(&["run", path.to_str().unwrap()]);
    let second = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "reports differ between runs");
    let bundle: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_valid(&schema("report.schema.json"), &bundle);
    let reports = bundle["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 10);
    for (i, r) in reports.iter().enumerate() {
        assert_eq!(r["index"], i);
    }
    // only H^9 exceeds the default degree cap
    let errors: Vec<_> = reports.iter().filter(|r| r["status"] == "error").collect();
    assert_eq!(errors.len(), 1, "{errors:#?}");
    assert_eq!(errors[0]["index"], 4);
    assert_eq!(
        first.status.code(),
        Some(if errors[0]["budget"] == true { 3 } else { 1 })
    );
}

#[test]
fn exit_codes() {
    let ok = cli(&["run", root().join("problems/z2_m2.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let malformed = temp_file("malformed.json", r#"{"modulus": 2,"#);
    let out = cli(&["run", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema error"));

    let bad_field = temp_file(
        "bad-field.json",
        r#"{"modulus": 2, "group": {"degree": 1}, "queries": [{"op": "theta", "degree": 0}]}"#,
    );
    let out = cli(&["run", bad_field.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("queries[0]"));

    let out = cli(&[
        "ext",
        "--group",
        "cyclic:2",
        "--source",
        "tate:0",
        "--target",
        "tate:1",
        "--degree",
        "1",
        "--budget-mb",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = cli(&[
        "ext", "--source", "nowhere", "--target", "tate:1", "--degree", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subcommands_emit_bundles() {
    let s = schema("report.schema.json");
    for args in [
        &[
            "cohomology",
            "--group",
            "symmetric:3",
            "--modulus",
            "3",
            "--degree",
            "1",
            "--twist",
            "1",
        ][..],
        &[
            "ext",
            "--group",
            "cyclic:4",
            "--modulus",
            "4",
            "--character",
            "3",
            "--source",
            "tate:0",
            "--target",
            "tate:1",
            "--degree",
            "1",
        ],
        &[
            "theta-report",
            "--group",
            "cyclic:3",
            "--modulus",
            "3",
            "--mode",
            "Fprime",
            "--min-j",
            "-1",
        ],
        &["koszul-probe", "--n", "2"],
        &["p-check", "--corpus", "z2_cone"],
    ] {
        let out = cli(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_valid(&s, &serde_json::from_slice(&out.stdout).unwrap());
    }
}

#[test]
fn theta_grid_on_cyclic_four() {
    let out = cli(&[
        "theta-report",
        "--group",
        "cyclic:4",
        "--modulus",
        "4",
        "--character",
        "3",
        "--max-i",
        "2",
        "--max-j",
        "2",
    ]);
    let bundle: Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdicts: Vec<&str> = bundle["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["result"]["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts.len(), 9);
    assert!(
        verdicts.iter().all(|v| *v == "ISO" || *v == "MONO"),
        "{verdicts:?}"
    );
}

#[test]
fn accept_filter_and_negative_control() {
    let out = cli(&["accept", "--filter", "koszul", "--table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("criterion 10  PASS"));

    let out = cli(&["accept", "--filter", "oracle", "--corrupt-oracle"]);
    assert_eq!(out.status.code(), Some(1));
    let results: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(results[0]["passed"], false);
}
