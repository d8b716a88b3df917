use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forest-pi")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn explain_prints_every_explanation() {
    let o = run(&["explain", &fixture("fig1.json"), &fixture("inst_3_12.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "decision: 1\nexplanations: 2\n  X∈[2, 6)\n  X∈(-inf, 6) ∧ Y∈[-7, +inf)\n"
    );
    let o = run(&["explain", &fixture("fig1.json"), &fixture("inst_10_-20.json")]);
    assert!(stdout(&o).contains("  X∈[6, +inf)\n  X∈(-inf, 2) ∪ [6, +inf) ∧ Y∈(-inf, -7)\n"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "explain", &fixture("fig1.json"), &fixture("inst_10_-20.json")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["decision"], 0);
    assert_eq!(v["explanations"].as_array().unwrap().len(), 2);
    assert_eq!(v["explanations"][0]["features"]["X"]["values"], serde_json::json!([3]));
    assert_eq!(v["explanations"][1]["features"]["Y"]["render"], "(-inf, -7)");
}

#[test]
fn constant_model_has_the_empty_explanation() {
    let o = run(&["explain", &fixture("const1.json"), &fixture("empty_instance.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "decision: 1\nexplanations: 1\n  ⊤\n");
}

#[test]
fn eval_prints_the_class() {
    let o = run(&["eval", &fixture("fig1.json"), &fixture("inst_3_12.json")]);
    assert_eq!(stdout(&o), "1\n");
    let o = run(&["eval", &fixture("fig1.json"), &fixture("inst_2_-7.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["eval", &fixture("ternary.json"), &fixture("inst_x1_y2.json")]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn encode_dumps_literal_encodings() {
    let o = run(&["encode", &fixture("fig1.json"), "--scheme", "one_hot"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("scheme: one_hot"));
    assert!(text.contains("X=[2, 6) ↦ ¬X#1 ¬X#3"), "{text}");

    let o = run(&["encode", &fixture("fig1.json"), "--scheme", "prefix"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("indicators: X#2 X#3 Y#2"));

    let o = run(&["encode", &fixture("fig1.json"), "--scheme", "gray"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn encode_exports_cnf_and_dot() {
    let o = run(&["encode", &fixture("fig1.json"), "--dimacs"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("c 1 X#1"));
    assert!(text.lines().any(|l| l.starts_with("p cnf ")));
    let o = run(&["encode", &fixture("fig1.json"), "--dot", "--class", "0"]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = run(&["encode", &fixture("fig1.json"), "--dot", "--dimacs"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_each_check() {
    let o = run(&["verify", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for name in ["prop1", "prop2", "prop3", "prop4", "lemma1", "lemma2", "def1", "prefix", "highest_bit"] {
        assert!(text.contains(&format!("PASS {name} ")), "{name} missing in\n{text}");
    }
    assert!(text.trim_end().ends_with("all checks passed"));
}

#[test]
fn verify_fails_when_the_cap_is_too_small() {
    let o = run(&["--cap", "1", "verify", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn errors_map_to_exit_codes() {
    let missing = run(&["explain", "/nonexistent/model.json", &fixture("inst_3_12.json")]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("/nonexistent/model.json"));

    let bad = run(&["explain", &fixture("inst_3_12.json"), &fixture("inst_3_12.json")]);
    assert_eq!(bad.status.code(), Some(2));

    let tight = run(&["--node-budget", "3", "explain", &fixture("fig1.json"), &fixture("inst_3_12.json")]);
    assert_eq!(tight.status.code(), Some(3));
    assert!(stderr(&tight).contains("limit is 3"));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("forest.toml");
    std::fs::write(&path, "node_budget = 3\nformat = \"json\"\n").unwrap();
    let cfg = path.to_str().unwrap();
    let args = ["--config", cfg, "explain", &fixture("fig1.json"), &fixture("inst_3_12.json")];
    assert_eq!(run(&args).status.code(), Some(3));
    // flags override the file
    let o = run(&["--node-budget", "100000", "--config", cfg, "explain", &fixture("fig1.json"), &fixture("inst_3_12.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_ok());

    std::fs::write(&path, "colour = \"red\"\n").unwrap();
    assert_eq!(run(&args).status.code(), Some(2));
}
