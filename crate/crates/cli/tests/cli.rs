use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use localroots::local::{LocalMatrix, MatrixFile};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localroots"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v)
}

fn matrix_from(v: &Value) -> LocalMatrix {
    let file: MatrixFile = serde_json::from_value(v.clone()).unwrap();
    LocalMatrix::from_json(&file, None).unwrap()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_unipotent_over_q5() {
    let path = fixture("unipotent3.json");
    let (code, r) = json_report(&["analyze", "--prime", "5", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["op"], "analyze");
    assert_eq!(r["verdict"]["distal"], true);
    assert_eq!(r["verdict"]["unipotent"], true);
    assert_eq!(r["verdict"]["roots_all_orders"], "yes");
    assert_eq!(r["certificate"]["kind"], "one_parameter");
    assert_eq!(r["precision_used"], 64);
}

#[test]
fn precision_flag_is_reported() {
    let path = fixture("unipotent3.json");
    let (_, r) = json_report(&["analyze", "--prime", "7", "--precision", "12", path.to_str().unwrap()]);
    assert_eq!(r["precision_used"], 12);
}

#[test]
fn density_of_worked_group() {
    let path = fixture("circle_group.json");
    let (code, r) = json_report(&["density", "--spec", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["dense"], false);
    assert_eq!(r["certificate"]["oracle_agrees"], true);
    let (_, r) = json_report(&["density", "--spec", path.to_str().unwrap(), "--k", "9"]);
    assert_eq!(r["verdict"]["dense"], true);
}

#[test]
fn square_root_of_jordan_block() {
    let path = fixture("jordan.json");
    let (code, r) = json_report(&["root", "--k", "2", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "yes");
    let w = matrix_from(&r["certificate"]["witness"]);
    let expect = LocalMatrix::from_json_str(
        r#"{"field": {"kind": "rational"}, "n": 2, "entries": [["1", "1/2"], ["0", "1"]]}"#,
        None,
    )
    .unwrap();
    assert_eq!(w, expect);
}

#[test]
fn echoed_matrices_reparse_identically() {
    for name in ["jordan.json", "unipotent3.json", "laurent_jordan.json", "padic_digits.json"] {
        let path = fixture(name);
        let original = LocalMatrix::from_json_str(&std::fs::read_to_string(&path).unwrap(), None).unwrap();
        let (_, r) = json_report(&["root", "--k", "3", path.to_str().unwrap()]);
        assert_eq!(matrix_from(&r["input"]), original, "{name}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let path = fixture("diag41.json");
    let args = ["--json", "global", "--primes", "first:5", path.to_str().unwrap()];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn global_blocks_diag_four_one() {
    let path = fixture("diag41.json");
    let (code, r) = json_report(&["global", "--primes", "2,3,5,7,11", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["roots_all_orders"], "no");
    assert_eq!(r["verdict"]["is_unipotent"], false);
    assert_eq!(r["certificate"]["roots_all_orders"]["k"], "3");
    assert_eq!(r["certificate"]["per_prime"].as_array().unwrap().len(), 5);
    assert_eq!(r["certificate"]["per_prime"][0]["distal"], false);
}

#[test]
fn bounds() {
    let (code, r) = json_report(&["bound", "--n", "2", "--prime", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["unipotent_power_bound"], "24");
    let (_, r) = json_report(&["bound", "--n", "2", "--laurent", "2"]);
    assert_eq!(r["verdict"]["unipotent_power_bound"], "6");
    let (_, r) = json_report(&["bound", "--n", "1", "--laurent", "9"]);
    assert_eq!(r["verdict"]["torsion_exponent_bound"], "8");
}

#[test]
fn towers_inside_finite_cyclic_groups() {
    let path = fixture("rotation.json");
    let (code, r) = json_report(&["tower", "--q", "3", "--depth", "3", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "yes");
    assert_eq!(r["certificate"]["verified"], true);
    assert_eq!(r["certificate"]["witnesses"].as_array().unwrap().len(), 3);
    let (code, r) = json_report(&["tower", "--q", "2", "--depth", "2", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "no");
}

#[test]
fn unipotent_tower_over_qp_carries_congruences() {
    let text = r#"{"field": {"kind": "padic", "p": 3}, "n": 2, "entries": [["1", "3"], ["0", "1"]]}"#;
    let f = temp_json(text);
    let (code, r) = json_report(&["tower", "--q", "3", "--depth", "4", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["verified"], true);
    assert_eq!(r["certificate"]["congruence"], serde_json::json!([true, true, true, true]));
}

#[test]
fn undecided_exits_with_two() {
    let path = fixture("minus_identity.json");
    let (code, r) = json_report(&["root", "--k", "2", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "undecided");
    let path = fixture("padic_digits.json");
    let (code, r) = json_report(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"]["unipotent"], "undecided");
}

#[test]
fn malformed_input_exits_with_one() {
    let missing = run(&["root", "--k", "2", "/nonexistent/m.json"]);
    assert_eq!(missing.status.code(), Some(1));
    let bad = temp_json(r#"{"field": {"kind": "rational"}, "n": 2, "entries": [["1"]]}"#);
    assert_eq!(run(&["root", "--k", "2", bad.path().to_str().unwrap()]).status.code(), Some(1));
    let extra = temp_json(r#"{"field": {"kind": "rational"}, "n": 1, "entries": [["1"]], "x": 0}"#);
    assert_eq!(run(&["root", "--k", "2", extra.path().to_str().unwrap()]).status.code(), Some(1));
    let jordan = fixture("jordan.json");
    let j = jordan.to_str().unwrap();
    assert_eq!(run(&["root", "--k", "2", "--bogus", j]).status.code(), Some(1));
    assert_eq!(run(&["global", "--primes", "2,4", j]).status.code(), Some(1));
    assert_eq!(run(&["global", "--primes", "first:x", j]).status.code(), Some(1));
    assert_eq!(run(&["bound", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "--n", "2", "--prime", "2", "--laurent", "4"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "--n", "2", "--laurent", "6"]).status.code(), Some(1));
    let laurent = fixture("laurent_jordan.json");
    assert_eq!(run(&["analyze", "--prime", "3", laurent.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn text_output_by_default() {
    let path = fixture("circle_group.json");
    let out = run(&["density", "--spec", path.to_str().unwrap(), "--k", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("op: density\n"), "{text}");
    assert!(text.contains("dense: false"));
}
