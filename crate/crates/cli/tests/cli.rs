use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn entgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn nonzero_amplitudes(path: &Path) -> usize {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["amplitudes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|z| z[0].as_f64().unwrap() != 0.0 || z[1].as_f64().unwrap() != 0.0)
        .count()
}

#[test]
fn synth_path_then_verify() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "path.graph", "3\n1 2\n2 3\n");
    let state = dir.path().join("path.json");
    let out = entgraph(&["synth", "-g", arg(&graph), "-o", arg(&state)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("match"));
    assert_eq!(nonzero_amplitudes(&state), 4);
    let out = entgraph(&["verify", "-g", arg(&graph), "-s", arg(&state)]);
    assert_eq!(code(&out), 0);
}

#[test]
fn synth_without_edges_gives_all_zeros() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "empty.graph", "5\n");
    let state = dir.path().join("zero.json");
    assert_eq!(code(&entgraph(&["synth", "-g", arg(&graph), "-o", arg(&state)])), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&state).unwrap()).unwrap();
    assert_eq!(v["n_qubits"], 5);
    assert_eq!(v["amplitudes"][0][0].as_f64(), Some(1.0));
    assert_eq!(nonzero_amplitudes(&state), 1);
}

#[test]
fn malformed_graph_reports_line() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "bad.graph", "4\n1 2\n2 x\n");
    let out = entgraph(&["synth", "-g", arg(&graph), "-o", arg(&dir.path().join("o.json"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn synthesized_states_reverify() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("c6", "6\n1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n"),
        ("k4", "4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"),
        ("iso", "5\n2 4\n4 5\n"),
    ] {
        let graph = write(&dir, &format!("{name}.graph"), text);
        let state = dir.path().join(format!("{name}.json"));
        assert_eq!(code(&entgraph(&["synth", "-g", arg(&graph), "-o", arg(&state)])), 0, "{name}");
        assert_eq!(code(&entgraph(&["verify", "-g", arg(&graph), "-s", arg(&state)])), 0, "{name}");
    }
}

#[test]
fn synth_alpha_override_can_miss() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "k5.graph", "5\n1 2\n1 3\n1 4\n1 5\n");
    let good = dir.path().join("good.json");
    assert_eq!(code(&entgraph(&["synth", "-g", arg(&graph), "-o", arg(&good), "--alpha", "0.75"])), 0);
    // With beta this small the leaf pairs pick up entanglement through the hub.
    let bad = dir.path().join("bad.json");
    let out = entgraph(&["synth", "-g", arg(&graph), "-o", arg(&bad), "--alpha", "0.2", "--gamma", "0.97"]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("extra edges"));
}

#[test]
fn analyze_w3_writes_dot_and_json() {
    let dir = TempDir::new().unwrap();
    let state = dir.path().join("w3.json");
    assert_eq!(code(&entgraph(&["catalog", "w", "3", "-o", arg(&state)])), 0);
    let dot = dir.path().join("w3.dot");
    let json = dir.path().join("w3.report.json");
    let out = entgraph(&["analyze", "-s", arg(&state), "--dot", arg(&dot), "--json", arg(&json)]);
    assert_eq!(code(&out), 0);
    let dot = fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.matches("label=\"0.6667\"").count(), 3);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["realized_edges"].as_array().unwrap().len(), 3);
}

#[test]
fn analyze_ghz_and_dur_star() {
    let dir = TempDir::new().unwrap();
    let ghz = dir.path().join("ghz.json");
    assert_eq!(code(&entgraph(&["catalog", "ghz", "4", "-o", arg(&ghz)])), 0);
    let out = entgraph(&["analyze", "-s", arg(&ghz)]);
    assert!(stdout(&out).contains("realized edges: none"));

    let star = dir.path().join("dur.json");
    assert_eq!(code(&entgraph(&["catalog", "dur-star", "4", "-o", arg(&star)])), 0);
    let out = entgraph(&["analyze", "-s", arg(&star)]);
    assert!(stdout(&out).contains("realized edges: 1-2 1-3 1-4 2-3 2-4 3-4"));
}

#[test]
fn verify_reports_extra_edges() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "star.graph", "4\n1 2\n1 3\n1 4\n");
    let state = dir.path().join("dur.json");
    entgraph(&["catalog", "dur-star", "4", "-o", arg(&state)]);
    let out = entgraph(&["verify", "-g", arg(&graph), "-s", arg(&state)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("extra edges: 2-3 2-4 3-4"));

    let chain = dir.path().join("chain.json");
    entgraph(&["catalog", "chain3", "-o", arg(&chain), "--alpha", "0.5", "--beta", "0.5", "--gamma", "0.5"]);
    let path = write(&dir, "path.graph", "3\n1 2\n2 3\n");
    assert_eq!(code(&entgraph(&["verify", "-g", arg(&path), "-s", arg(&chain)])), 0);
}

#[test]
fn catalog_star_and_star4() {
    let dir = TempDir::new().unwrap();
    let star = dir.path().join("star.json");
    assert_eq!(code(&entgraph(&["catalog", "star", "6", "--alpha", "0.9", "-o", arg(&star)])), 0);
    assert_eq!(nonzero_amplitudes(&star), 7);
    let s4 = dir.path().join("s4.json");
    assert_eq!(code(&entgraph(&["catalog", "star4", "-o", arg(&s4)])), 0);
    assert_eq!(nonzero_amplitudes(&s4), 5);
    assert_eq!(code(&entgraph(&["catalog", "star", "6", "-o", arg(&star)])), 2);
}

#[test]
fn unnormalized_state_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "bad.json", r#"{"n_qubits": 2, "amplitudes": [[1,0],[1,0],[0,0],[0,0]]}"#);
    assert_eq!(code(&entgraph(&["analyze", "-s", arg(&state)])), 2);
}

#[test]
fn ambiguous_concurrence_is_a_numerical_error() {
    let dir = TempDir::new().unwrap();
    let e: f64 = 5e-8;
    let a = (1.0 - e * e).sqrt();
    let state = write(
        &dir,
        "weak.json",
        &format!(r#"{{"n_qubits": 2, "amplitudes": [[{a:.17},0],[0,0],[0,0],[{e:e},0]]}}"#),
    );
    assert_eq!(code(&entgraph(&["analyze", "-s", arg(&state)])), 3);
}

#[test]
fn selftest_is_deterministic_and_validates_range() {
    let dir = TempDir::new().unwrap();
    let run = || entgraph(&["selftest", "--max-n", "4", "--samples", "0", "--seed", "3", "-o", arg(dir.path())]);
    let first = run();
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert_eq!(stdout(&first), stdout(&run()));
    assert_eq!(stdout(&first).matches("[PASS]").count(), 10);
    assert_eq!(code(&entgraph(&["selftest", "--max-n", "9"])), 2);
}
