//! End-to-end tests of the `tactics` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tactics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tactics"))
        .args(args)
        .env_remove("TACTICS_SEED")
        .output()
        .expect("binary runs")
}

fn circuit(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

fn summary(out: &Output) -> Value {
    records(out).into_iter().rfind(|r| r["record"] == "summary").expect("summary record")
}

#[test]
fn run_prints_bell_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "bell.circ", "qubits 2\nh 0\ncnot 0 1\n");
    let out = tactics(&["run", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    let amps = r["amplitudes"].as_array().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((amps[0][0].as_f64().unwrap() - h).abs() < 1e-11);
    assert!((amps[3][0].as_f64().unwrap() - h).abs() < 1e-11);
    assert_eq!(amps[1][0].as_f64().unwrap(), 0.0);
}

#[test]
fn forced_measurement_outcomes_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "m.circ", "qubits 1\nh 0\nmeasure xp 0\n");
    let out = tactics(&["run", c.to_str().unwrap(), "--force-outcomes", "-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &records(&out)[0];
    assert_eq!(r["outcomes"][0]["eigenvalue"], -1);
    assert!((r["outcomes"][0]["probability"].as_f64().unwrap() - 0.5).abs() < 1e-11);
}

#[test]
fn compile_emits_a_program_header_and_instructions() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "t.circ", "qubits 1\nt 0\n");
    let out = tactics(&["compile", c.to_str().unwrap(), "--mode", "strict"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    assert_eq!(rs[0]["record"], "program");
    assert!(rs.len() > 5);
}

#[test]
fn strict_verify_passes_and_dropped_feedforward_fails() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("h.circ", "qubits 1\nh 0\n"), ("cnot.circ", "qubits 2\ncnot 0 1\n"), ("t.circ", "qubits 1\nh 0\nt 0\n")] {
        let c = circuit(dir.path(), name, text);
        let path = c.to_str().unwrap();
        let out = tactics(&["verify", path, "--mode", "strict", "--trials", "200", "--tol", "1e-9"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let s = summary(&out);
        assert_eq!(s["passed"], true);
        assert_eq!(s["strict_ok"], true);
        assert_eq!(records(&out).len(), 201);
    }
    let c = circuit(dir.path(), "ht.circ", "qubits 1\nh 0\nt 0\n");
    let out = tactics(&["verify", c.to_str().unwrap(), "--mode", "strict", "--trials", "100", "--drop-feedforward"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(summary(&out)["passed"], false);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "c.circ", "qubits 2\nh 0\nt 1\ncnot 1 0\n");
    let path = c.to_str().unwrap();
    let args = ["verify", path, "--mode", "strict", "--trials", "50", "--seed", "17"];
    let a = tactics(&args);
    let b = tactics(&args);
    assert_eq!(a.stdout, b.stdout);
    let other = tactics(&["verify", path, "--mode", "strict", "--trials", "50", "--seed", "18"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn seed_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "c.circ", "qubits 1\nh 0\nmeasure x 0\nt 0\n");
    let path = c.to_str().unwrap();
    let flag = tactics(&["run", path, "--trials", "20", "--seed", "5"]);
    let env = Command::new(env!("CARGO_BIN_EXE_tactics"))
        .args(["run", path, "--trials", "20"])
        .env("TACTICS_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn out_flag_writes_the_same_records() {
    let dir = tempfile::tempdir().unwrap();
    let c = circuit(dir.path(), "h.circ", "qubits 1\nh 0\n");
    let file = dir.path().join("report.jsonl");
    let direct = tactics(&["verify", c.to_str().unwrap(), "--trials", "10"]);
    let written = tactics(&["verify", c.to_str().unwrap(), "--trials", "10", "--out", file.to_str().unwrap()]);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), direct.stdout);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = circuit(dir.path(), "bad.circ", "qubits 1\nfrobnicate 0\n");
    let out = tactics(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(tactics(&["run", "/nonexistent/x.circ"]).status.code(), Some(3));
    assert_eq!(tactics(&["demo", "nosuch"]).status.code(), Some(2));
    assert_eq!(tactics(&["run", "--bogus"]).status.code(), Some(2));
    let meas = circuit(dir.path(), "m.circ", "qubits 1\nmeasure x 0\n");
    assert_ne!(tactics(&["verify", meas.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn demos_pass() {
    let dc = tactics(&["demo", "densecoding", "--trials", "100"]);
    assert_eq!(dc.status.code(), Some(0));
    assert_eq!(summary(&dc)["passed"], true);
    let walk = tactics(&["demo", "walk", "--trials", "20000"]);
    assert_eq!(walk.status.code(), Some(0));
    let s = summary(&walk);
    assert!((s["mean_steps"].as_f64().unwrap() - 4.0).abs() < 0.2, "{s}");
    let even = tactics(&["demo", "walk", "--trials", "20000", "--even-parity"]);
    assert_eq!(even.status.code(), Some(0));
    let g = tactics(&["demo", "gadgets", "--trials", "20"]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(records(&g).len(), 10);
}
