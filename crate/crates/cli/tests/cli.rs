use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn meros(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meros")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = meros(&["validate", &fixture("rico.meros")]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).is_empty());

    let bad = meros(&["validate", &fixture("two_servers.meros")]);
    assert_eq!(code(&bad), 1);
    let lines: Vec<String> = stdout(&bad).lines().map(str::to_string).collect();
    assert_eq!(lines.iter().filter(|l| l.contains(" error ")).count(), 1);
    assert!(lines[0].starts_with("MR-001 error "), "{lines:?}");
}

#[test]
fn parse_failure_is_exit_3_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.meros");
    fs::write(&path, "system \"S\" {\n  node {\n}\n").unwrap();
    let o = meros(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("bad.meros:2:"), "{}", stderr(&o));
    assert_eq!(code(&meros(&["validate", "/no/such/file.meros"])), 3);
}

#[test]
fn usage_errors_are_exit_2() {
    assert_eq!(code(&meros(&["render", &fixture("rico.meros"), "--mode", "spiral"])), 2);
    assert_eq!(code(&meros(&["frobnicate"])), 2);
    assert_eq!(code(&meros(&[])), 2);
}

#[test]
fn ingest_then_validate_then_render() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("mb.meros");
    let o = meros(&[
        "ingest",
        &fixture("snapshots/move_base.json"),
        "-o",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(&model).unwrap();
    assert!(text.contains("system \"move_base\""), "{text}");
    assert!(text.contains("action \"/move_base\""), "{text}");
    assert_eq!(code(&meros(&["validate", model.to_str().unwrap()])), 0);
    let dot = meros(&["render", model.to_str().unwrap(), "--mode", "edges"]);
    assert_eq!(code(&dot), 0);
    assert!(stdout(&dot).starts_with("digraph \"move_base\" {"));
}

#[test]
fn ingest_warns_on_ambiguity() {
    let o = meros(&["ingest", &fixture("snapshots/ambiguous.json"), "--name", "amb"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("candidate servers"), "{}", stderr(&o));
    assert!(stdout(&o).contains("system \"amb\""));
    assert!(!stdout(&o).contains("action \""));
}

#[test]
fn ingest_rejects_bad_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    fs::write(&path, "{\"nodes\": [").unwrap();
    assert_eq!(code(&meros(&["ingest", path.to_str().unwrap()])), 3);
}

#[test]
fn render_levels_and_system_selection() {
    for level in ["system", "medium", "connection"] {
        let o = meros(&["render", &fixture("rico.meros"), "--level", level]);
        assert_eq!(code(&o), 0, "{level}: {}", stderr(&o));
    }
    let o = meros(&["render", &fixture("rico.meros"), "--system", "Nope"]);
    assert_eq!(code(&o), 2);
    let o = meros(&["render", &fixture("two_servers.meros")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("MR-001"));
}

#[test]
fn render_is_byte_stable() {
    let a = meros(&["render", &fixture("rico.meros"), "--level", "medium", "--infra"]);
    let b = meros(&["render", &fixture("rico.meros"), "--level", "medium", "--infra"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_fixture_workspace() {
    let o = meros(&["scan", &fixture("workspace")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("workspace \"workspace\""), "{text}");
    assert!(text.contains("metapackage \"robot\""), "{text}");
    assert!(text.contains("actiondef \"MoveTo\""), "{text}");
}

#[test]
fn simulate_traces() {
    let ok = meros(&["simulate", &fixture("traces/happy.trace")]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).ends_with("verdict: accepted\n"), "{}", stdout(&ok));
    let bad = meros(&["simulate", &fixture("traces/succeed_before_accept.trace")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("verdict: rejected@2"), "{}", stdout(&bad));
}

#[test]
fn simulate_with_custom_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.table");
    fs::write(&table, "server Pending SetAccepted Active\n").unwrap();
    let o = meros(&[
        "simulate",
        &fixture("traces/happy.trace"),
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    fs::write(&table, "server Pending\n").unwrap();
    let o = meros(&[
        "simulate",
        &fixture("traces/happy.trace"),
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn stats_counts_rico() {
    let o = meros(&["stats", &fixture("rico.meros")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("actions: 3\n"), "{text}");
    assert!(text.contains("components: 14\n"), "{text}");
    assert!(text.contains("mediums: 1\n"), "{text}");
}
