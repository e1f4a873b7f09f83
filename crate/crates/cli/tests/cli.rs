use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partition-ops"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unary_basis_example() {
    let o = run(&["basis", "--kind", "unary", "-p", "2", "-j", "0", "--weights", "2", "--min-degree", "-5"]);
    assert!(o.status.success());
    let words: Vec<String> = stdout(&o).lines().map(|l| l.split('\t').next().unwrap().to_string()).collect();
    assert_eq!(words, vec!["R5", "R4", "R3", "R2", "R1"]);
}

#[test]
fn compose_examples() {
    let o = run(&["compose", "-p", "2", "-j", "99", "R1", "R1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(&["compose", "-p", "2", "-j", "0", "R2", "R1"]);
    assert_eq!(stdout(&o).trim(), "R2 R1");
    let o = run(&["compose", "-p", "2", "-j", "0", "1", "R3"]);
    assert_eq!(stdout(&o).trim(), "R3");
}

#[test]
fn compose_rejects_missing_letters() {
    let o = run(&["compose", "-p", "2", "-j", "0", "R1", "R0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
}

#[test]
fn check_examples_pass() {
    for args in [
        vec!["check", "bm", "-p", "2", "--gens", "1", "--weight-cap", "16", "--window", "-30:5"],
        vec!["check", "bar", "-p", "2", "-j", "1", "-W", "4"],
        vec!["check", "adem", "-p", "3", "--index-window", "8"],
        vec!["check", "lie", "-p", "2"],
        vec!["check", "nishida", "-p", "3", "--index-window", "3", "--source-window", "2"],
        vec!["check", "stability", "-p", "5"],
    ] {
        let o = run(&args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert_eq!(stdout(&o).lines().last(), Some("PASS"), "{args:?}");
    }
}

#[test]
fn empty_check_fails_with_status_one() {
    let o = run(&["check", "bm", "--window", "5:1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().last(), Some("FAIL"));
}

#[test]
fn empty_window_lists_nothing() {
    let o = run(&["basis", "-p", "2", "-j", "0", "--window", "5:1"]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
}

#[test]
fn json_schema() {
    let o = run(&["--format", "json", "--seed", "11", "compose", "-p", "2", "-j", "0", "R2", "R1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["meta"]["p"], 2);
    assert_eq!(v["meta"]["seed"], 11);
    assert_eq!(v["meta"]["grading"], "homotopy");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["word"], "R2 R1");
    assert_eq!(rows[0]["degree"], -3);
    assert_eq!(rows[0]["weight"], 4);
    assert_eq!(rows[0]["coefficients"], 1);
}

#[test]
fn csv_header_and_cohomological_degrees() {
    let o = run(&["--format", "csv", "--cohomological", "basis", "-p", "2", "-j", "0", "--weights", "2", "--max-degree", "2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,degree,weight,coeff"));
    assert_eq!(lines.collect::<Vec<_>>(), vec!["R1,1,2,", "R2,2,2,"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "basis", "--kind", "free", "-p", "3", "--gens", "1,2", "--weight-cap", "9", "--window", "-20:4"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let seq = ["--jobs", "1", "--format", "json", "basis", "--kind", "free", "-p", "3", "--gens", "1,2", "--weight-cap", "9", "--window", "-20:4"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&seq)));
}

#[test]
fn rewrite_kinds() {
    let o = run(&["rewrite", "--kind", "steenrod", "-p", "2", "Sq2 Sq2"]);
    assert_eq!(stdout(&o).trim(), "Sq3 Sq1");
    let o = run(&["rewrite", "--kind", "nishida", "-p", "2", "-j", "2", "Sq1 R-1"]);
    assert_eq!(stdout(&o).trim(), "[x0,Sq1 x0]");
    let o = run(&["rewrite", "--kind", "primal", "-p", "2", "Q3 Q1"]);
    assert!(o.status.success());
    let o = run(&["rewrite", "--kind", "dual", "-p", "2", "-j", "3", "Q1 Q1"]);
    assert!(o.status.success());
}

#[test]
fn memory_budget_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_partition-ops"))
        .args(["check", "bar", "-j", "0"])
        .env("PARTITION_OPS_MEM_MB", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memory budget"));
}

#[test]
fn usage_errors_exit_nonzero() {
    assert!(!run(&["basis", "-p", "4"]).status.success());
    assert!(!run(&["check", "bar", "-p", "3"]).status.success());
    assert!(!run(&["frobnicate"]).status.success());
}
