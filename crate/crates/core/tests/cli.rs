use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use hullcalc::cli::parse::Workspace;
use serde_json::Value;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/small.hc")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hullcalc"))
        .arg("-f")
        .arg(data())
        .args(args)
        .output()
        .unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hullcalc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["validate"])), 0);
    assert_eq!(code(&run(&["essential", "swap"])), 0);
    assert_eq!(code(&run(&["essential", "pick"])), 1);
    assert_eq!(code(&run(&["injective", "R"])), 0);
    assert_eq!(code(&run(&["injective", "P"])), 0);
    assert_eq!(code(&run(&["injective", "E"])), 1);
    assert_eq!(code(&run(&["iso", "R", "R"])), 0);
    assert_eq!(code(&run(&["iso", "R", "P"])), 1);
    assert_eq!(code(&run(&["invert", "swap"])), 0);
    assert_eq!(code(&run(&["invert", "pick"])), 2);
    assert_eq!(code(&run(&["hull", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--max-frontier", "1", "hom", "R", "R"])), 3);
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["hull", "nope"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn syntax_errors_carry_positions() {
    let out = run_stdin(&["validate"], "monoid M\nelements 1\nunit 1\ntable\n1 1\n");
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("-:5"), "{err}");
}

#[test]
fn quiet_prints_nothing() {
    let out = run(&["--quiet", "essential", "pick"]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
}

#[test]
fn json_report_shape() {
    let out = run(&["--format", "json", "hull", "E"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["command"], "hull");
    assert_eq!(doc["inputs"]["args"]["a"], "E");
    assert_eq!(doc["inputs"]["args"]["method"], "both");
    assert_eq!(doc["result"]["holds"], true);
    assert!(doc["witnesses"].is_object());
    let again = run(&["--format", "json", "hull", "E"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn hull_of_empty_is_terminal() {
    let out = run(&["--format", "json", "hull", "E", "--method", "quotient"]);
    let doc = json(&out);
    let ws = Workspace::parse("out", doc["result"]["definitions"].as_str().unwrap()).unwrap();
    let hull = ws.mset("E.hull.quotient").unwrap();
    assert_eq!(hull.size(), 1);
}

#[test]
fn text_output_reparses() {
    for args in [&["hull", "R"][..], &["essential", "pick"], &["exp", "R", "P"], &["quotients", "R"], &["sb", "swap", "swap"]] {
        let out = run(args);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with(&format!("# {}", args[0])));
        Workspace::parse("out", &text).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn non_essential_witness_keeps_image_apart() {
    let doc = json(&run(&["--format", "json", "essential", "pick"]));
    assert_eq!(doc["result"]["holds"], false);
    let ws = Workspace::parse("out", doc["result"]["definitions"].as_str().unwrap()).unwrap();
    let composite = ws.map("pick.collapse.composite").unwrap();
    let proj = ws.map("pick.collapse.proj").unwrap();
    assert!(composite.is_monic());
    assert!(!proj.is_iso());
}
