use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_massey"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const SQUARE: &str = r#"{"m":4,"facets":[[1,2],[2,3],[3,4],[4,1]]}"#;

#[test]
fn goncharova_report() {
    let v = json(&["goncharova", "--qmax", "2", "--wmax", "8"], "");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pentagonal"], true);
}

#[test]
fn lie_triple_product() {
    let v = json(&["massey", "--lie", "witt_plus", "--wmax", "8", "--classes", "e1;e2;e2"], "");
    assert_eq!(v["outcome"]["status"], "defined_strict");
    assert_eq!(v["outcome"]["value"]["representative"], "-e2^e3");
}

#[test]
fn square_reports() {
    let g = json(&["golod"], SQUARE);
    assert_eq!(g["verdict"], "not_golod");
    let out = run(&["betti", "--format", "csv"], SQUARE);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("i,I,dim"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn generated_complex_feeds_the_product() {
    let q3 = run(&["generate", "qn", "--n", "3"], "");
    assert!(q3.status.success());
    let text = String::from_utf8(q3.stdout).unwrap();
    let v = json(&["massey", "--supports", "1,4;2,5;3,6"], &text);
    assert_eq!(v["outcome"]["status"], "defined_strict");
    assert_eq!(v["outcome"]["triviality"], "nontrivial");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["betti"], r#"{"m":2}"#).status.code(), Some(2));
    assert_eq!(run(&["betti"], "not json").status.code(), Some(2));
    assert_eq!(run(&["poincare", "--terms", "40"], r#"{"n":1,"gens":[[2]]}"#).status.code(), Some(3));
}
