//! End-to-end checks of the binary: exit codes, JSON output, file and stdin
//! input, diagnostics for malformed documents, and one smoke test per
//! subcommand.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

/// A valid document whose equation is trivially solvable (b is empty, hence a
/// global square): analyzing it must exit 0.
const SOLVABLE_DOC: &str = r#"{
    "base": {"kind": "semi-global", "residue_field": "separably-closed"},
    "curves": [
        {"id": "e", "name": "fiber", "kind": "special-fiber", "rational": true},
        {"id": "h", "name": "section", "kind": "horizontal", "rational": true}
    ],
    "points": [{"id": "p", "curves": ["e", "h"]}],
    "problem": {
        "a": {"exponents": {"h": 1}, "unit": "square"},
        "b": {"exponents": {}, "unit": "square"},
        "c": {"exponents": {"e": 2}, "unit": "square"}
    }
}"#;

/// The same configuration over a finite base with a non-split equation: the
/// residue sets are containments rather than exact, so the analysis must stop
/// at inconclusive and exit 1.
const INCONCLUSIVE_DOC: &str = r#"{
    "base": {"kind": "semi-global", "residue_field": {"finite": 5}},
    "curves": [
        {"id": "e", "name": "fiber", "kind": "special-fiber", "rational": true},
        {"id": "h", "name": "section", "kind": "horizontal", "rational": true}
    ],
    "points": [{"id": "p", "curves": ["e", "h"]}],
    "problem": {
        "a": {"exponents": {"h": 1}, "unit": "square"},
        "b": {"exponents": {"e": 1}, "unit": "square"},
        "c": {"exponents": {"e": 2}, "unit": "square"}
    }
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinorm"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trinorm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary spawns");
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(input.as_bytes())
        .expect("document fits the pipe");
    child.wait_with_output().expect("the binary exits")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn json(output: &Output) -> Value {
    serde_json::from_str(&stdout(output)).unwrap_or_else(|e| {
        panic!("stdout is JSON: {e}\n--- stdout ---\n{}", stdout(output))
    })
}

#[test]
fn bare_fixture_lists_the_library() {
    let output = run(&["fixture"]);
    assert_eq!(output.status.code(), Some(0));
    let listing = stdout(&output);
    for name in [
        "triangle-semilocal",
        "p1-dvr-odd",
        "p1-dvr-even",
        "i3-elliptic",
        "gabber-local",
        "tree-cor62",
        "weil-insufficient",
    ] {
        assert!(listing.contains(name), "listing must mention {name}");
    }
}

#[test]
fn analyze_fixture_emits_the_verdict_as_json() {
    let output = run(&["analyze", "--fixture", "triangle-semilocal", "--json"]);
    assert_eq!(output.status.code(), Some(0), "definite verdicts exit 0");
    let report = json(&output);
    assert_eq!(report["verdict"]["kind"], "no-rational-point");
    assert_eq!(report["verdict"]["certificate"]["kind"], "system-infeasible");

    let output = run(&["analyze", "--fixture", "tree-cor62", "--json"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(json(&output)["verdict"]["kind"], "has-rational-point");
}

#[test]
fn analyze_reads_documents_from_files() {
    let mut file = tempfile::NamedTempFile::new().expect("a scratch file");
    file.write_all(SOLVABLE_DOC.as_bytes()).expect("document written");
    let path = file.path().to_str().expect("utf-8 scratch path");

    let output = run(&["analyze", path, "--json"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let report = json(&output);
    assert_eq!(report["verdict"]["kind"], "has-rational-point");
    assert_eq!(report["verdict"]["witness"]["kind"], "split-norm-form");
}

#[test]
fn analyze_reads_documents_from_stdin() {
    let output = run_with_stdin(&["analyze", "-"], SOLVABLE_DOC);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("rational point exists"));
}

#[test]
fn inconclusive_analyses_exit_one() {
    let output = run_with_stdin(&["analyze", "-", "--json"], INCONCLUSIVE_DOC);
    assert_eq!(output.status.code(), Some(1), "stderr: {}", stderr(&output));
    let report = json(&output);
    assert_eq!(report["verdict"]["kind"], "inconclusive");
}

#[test]
fn malformed_documents_exit_two_with_positions() {
    let broken = SOLVABLE_DOC.replace("\"rational\": true}", "\"rational\": true, \"genus\": 0}");
    let output = run_with_stdin(&["analyze", "-"], &broken);
    assert_eq!(output.status.code(), Some(2), "input defects exit 2");
    let diagnostics = stderr(&output);
    assert!(
        diagnostics.contains("line") && diagnostics.contains("column"),
        "diagnostics must carry a position: {diagnostics}"
    );
}

#[test]
fn unknown_fixtures_exit_two() {
    let output = run(&["analyze", "--fixture", "nonesuch"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("nonesuch"));
}

#[test]
fn weil_comparison_declines_local_bases() {
    let output = run(&["fixture", "gabber-local", "--weil"]);
    assert_eq!(output.status.code(), Some(0), "the verdict itself is definite");
    assert!(
        stdout(&output).contains("place-level comparison unavailable"),
        "a local base has no base curve to collapse to"
    );
}

#[test]
fn weil_comparison_reports_the_forced_contradiction() {
    let output = run(&["fixture", "p1-dvr-odd", "--weil", "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let report = json(&output);
    assert_eq!(report["report"]["weil"]["status"], "computed");
    assert_eq!(report["report"]["weil"]["outcome"]["kind"], "infeasible");
    assert_eq!(report["expectation_met"], true);
}

#[test]
fn blowup_transports_the_problem_and_keeps_the_verdict() {
    let output = run(&["blowup", "--fixture", "triangle-semilocal", "--point", "m3", "--json"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let value = json(&output);
    assert!(value["exceptional"].as_str().is_some(), "names the new curve");
    assert_eq!(
        value["new_points"].as_array().map(Vec::len),
        Some(2),
        "one new crossing per strict transform"
    );
    assert_eq!(value["report"]["verdict"]["kind"], "no-rational-point");
}

#[test]
fn kodaira_classifies_and_synthesizes() {
    let output = run(&[
        "kodaira",
        "--a2",
        "1",
        "--a6",
        "0,0,0,1",
        "--synthesize",
        "--json",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let value = json(&output);
    assert_eq!(value["type"], "I3");
    assert_eq!(value["v_delta"], 3);
    assert_eq!(value["fiber"]["kind"], "crossings");
    assert_eq!(
        value["synthesis"]["report"]["verdict"]["kind"],
        "no-rational-point"
    );
}

#[test]
fn oracle_certifies_a_two_class_rule() {
    let output = run(&[
        "oracle", "--q", "5", "--norm", "t", "--trials", "500", "--seed", "7", "--json",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let report = json(&output);
    assert_eq!(report["violations"], 0);
    assert_eq!(report["all_expected_observed"], true);

    let inadmissible = run(&["oracle", "--q", "7", "--norm", "t"]);
    assert_eq!(
        inadmissible.status.code(),
        Some(2),
        "q ≢ 1 (mod 4) is an input error"
    );
}
