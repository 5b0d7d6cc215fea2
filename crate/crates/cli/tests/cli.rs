use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn vartrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vartrack")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solves_satisfiable_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sat.cnf", "c tiny\np cnf 3 2\n1 -2 0\n2 3 0\n");
    let out = vartrack(&["solve", &f]);
    assert_eq!(out.status.code(), Some(10));
    let text = stdout(&out);
    assert!(text.contains("s SATISFIABLE"));
    assert!(text.contains("v 1 2 3 0") || text.lines().any(|l| l.starts_with("v ")));
}

#[test]
fn unsatisfiable_exit_code_and_dot() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unsat.cnf", "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n");
    let dot = dir.path().join("g.dot");
    let out = vartrack(&["solve", &f, "--learn", "uip", "--print-learned", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(20));
    let text = stdout(&out);
    assert!(text.contains("s UNSATISFIABLE"));
    assert!(text.lines().any(|l| l.starts_with("l ")));
    let graph = fs::read_to_string(dot).unwrap();
    assert!(graph.starts_with("digraph {"));
    assert!(graph.contains("->"));
}

#[test]
fn conflict_budget_reports_unknown() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unsat.cnf", "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n");
    let out = vartrack(&["solve", &f, "--max-conflicts", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("s UNKNOWN"));
}

#[test]
fn dot_without_conflict_is_empty_graph() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unit.cnf", "p cnf 1 1\n1 0\n");
    let dot = dir.path().join("g.dot");
    let out = vartrack(&["solve", &f, "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(fs::read_to_string(dot).unwrap(), "digraph { }\n");
}

#[test]
fn parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.cnf", "p cnf 1 1\n2 0\n");
    let out = vartrack(&["solve", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(vartrack(&["solve", "/nonexistent.cnf"]).status.code(), Some(1));
    assert_eq!(vartrack(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(vartrack(&["--help"]).status.code(), Some(0));
}

#[test]
fn any_demo_prints_reason() {
    let out = vartrack(&["demo", "any", "010"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("any = true"));
    assert!(text.contains("because (p3 = lcons false p2) ^ (p2 = lcons true p1)"));
    assert_eq!(vartrack(&["demo", "any", "012"]).status.code(), Some(1));
}

#[test]
fn sudoku_demo_reports_violation() {
    let dir = TempDir::new().unwrap();
    let mut rows = vec![".........".to_string(); 9];
    rows[1] = "..5......".into();
    rows[4] = "..5......".into();
    let f = write(&dir, "grid.txt", &(rows.join("\n") + "\n"));
    let out = vartrack(&["demo", "sudoku", &f]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("sudoku = false"));
    assert!(text.contains("violated Column(3)"));
    assert!(text.contains("(sfield at (2 , 3) = 5)"));
    assert!(text.contains("(sfield at (5 , 3) = 5)"));
}
