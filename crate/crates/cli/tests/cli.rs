use std::path::PathBuf;
use std::process::{Command, Output};

use bstkit_core::translate::translate_size;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
}

fn bstkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bstkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn example_one_exits_unsat() {
    let out = bstkit(&["solve", problem("ex1.bst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(20));
    assert_eq!(stdout(&out), "UNSAT\n");
}

#[test]
fn example_two_exits_unsat() {
    let out = bstkit(&["solve", problem("ex2.bst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(20));
}

#[test]
fn example_three_exits_sat_with_empty_x() {
    let out = bstkit(&["solve", problem("ex3.bst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let text = stdout(&out);
    assert!(text.starts_with("SAT\n"));
    assert!(text.lines().any(|l| l == "x = {}"), "{text}");
}

#[test]
fn translate_of_empty_input() {
    let out = bstkit(&["translate", "/dev/null"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn translate_prints_one_conjunct_per_line() {
    let out = bstkit(&["translate", problem("ex3.bst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), translate_size(5, 1));
}

#[test]
fn json_report() {
    let out = bstkit(&["solve", "--json", problem("ex3.bst").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "sat");
    assert_eq!(v["counts"]["xi_conjuncts"], translate_size(5, 1));
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["model"][0]["var"], "x");
    assert_eq!(v["model"][0]["value"], "{}");
}

#[test]
fn runs_are_deterministic() {
    let path = problem("ex3.bst");
    let a = bstkit(&["solve", path.to_str().unwrap()]);
    let b = bstkit(&["solve", "--activity", path.to_str().unwrap()]);
    let c = bstkit(&["solve", path.to_str().unwrap()]);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn batch_mode_reports_every_file() {
    let files: Vec<String> = ["ex1.bst", "ex2.bst", "ex3.bst"]
        .iter()
        .map(|f| problem(f).to_str().unwrap().to_owned())
        .collect();
    let mut args = vec!["solve", "--jobs", "2"];
    args.extend(files.iter().map(String::as_str));
    let out = bstkit(&args);
    assert_eq!(out.status.code(), Some(20));
    let text = stdout(&out);
    let verdicts: Vec<&str> = text.lines().filter(|l| !l.starts_with("  ")).collect();
    assert_eq!(verdicts.len(), 3);
    assert!(verdicts[0].ends_with("ex1.bst: UNSAT"));
    assert!(verdicts[2].ends_with("ex3.bst: SAT"));
}

#[test]
fn missing_file_is_an_error() {
    let out = bstkit(&["solve", "/nonexistent/problem.bst"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bstkit(&["solve"]).status.code(), Some(2));
    assert_eq!(bstkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bstkit(&["oracle", "/dev/null"]).status.code(), Some(2));
}

#[test]
fn oracle_agrees_on_examples() {
    let out = bstkit(&[
        "oracle",
        problem("ex2.bst").to_str().unwrap(),
        "--level",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(20));
    let out = bstkit(&[
        "oracle",
        problem("ex3.bst").to_str().unwrap(),
        "--level",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn generated_problems_parse_back() {
    let out = bstkit(&["gen", "--seed", "11", "--profile", "planted:4:3:2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let p = bstkit_core::syntax::parse_problem(&text).unwrap();
    assert_eq!(p.psi().len(), 2);
}

#[test]
fn flat_mode_dumps_dimacs() {
    let dir = std::env::temp_dir().join(format!("bstkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("flat.bst");
    let cnf = dir.join("flat.cnf");
    std::fs::write(&input, "x = y \\ z ; x != 0 ; y sub z").unwrap();
    let out = bstkit(&[
        "solve",
        "--flat",
        "--dump-cnf",
        cnf.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(20));
    let dimacs = std::fs::read_to_string(&cnf).unwrap();
    assert!(dimacs.starts_with("p cnf "));
    std::fs::remove_dir_all(&dir).unwrap();
}
