use std::path::Path;

use rqc_cli::{exit, run};
use rqc_core::library::qft;
use rqc_core::text::{emit, parse};

fn rqc(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("rqc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn gate_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("qubits")).collect()
}

#[test]
fn transpile_rz_at_real_level() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rz.rqc", "qubits 1\nrz 0 1.5707963267948966\n");
    let (code, out, _) = rqc(&["transpile", &f, "--level", "real"]);
    assert_eq!(code, exit::OK);
    assert_eq!(gate_lines(&out), ["f 0 1 1.5707963267948966"]);
    assert!(out.starts_with("qubits 2\n"));
}

#[test]
fn transpile_empty_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "empty.rqc", "qubits 3\n");
    for level in ["real", "f", "g"] {
        let (code, out, _) = rqc(&["transpile", &f, "--level", level]);
        assert_eq!(code, exit::OK);
        assert!(gate_lines(&out).is_empty(), "{level}");
    }
}

#[test]
fn transpile_unreachable_tolerance_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "rz.rqc", "qubits 1\nrz 0 1.5707963267948966\n");
    let (code, out, err) = rqc(&["transpile", &f, "--level", "g", "--eps", "1e-15", "--k-max", "10"]);
    assert_eq!(code, exit::NOT_REACHABLE);
    assert!(out.is_empty());
    assert!(err.contains("gate 0"), "{err}");
}

#[test]
fn transpile_output_reparses_and_reports_synthesis() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.rqc", "qubits 2\nh 0\ncx 0 1\nt 1\n");
    let out_path = dir.path().join("out.rqc");
    let (code, report, _) = rqc(&["transpile", &f, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let lowered = parse(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(lowered.num_qubits, 4);
    assert!(report.contains("# ri ancilla: 2"));
    assert!(report.contains("# work ancilla: 3"));
    assert!(report.contains("# synth gate 0 "));
    assert!(report.lines().any(|l| l.starts_with("# budget: ")));

    // The lowered file runs and verifies like any other circuit.
    let lowered_path = out_path.to_str().unwrap();
    let (code, _, _) = rqc(&["run", lowered_path, "--init", "8"]);
    assert_eq!(code, exit::OK);
    let (code, _, _) = rqc(&["verify", lowered_path, "--eps", "1e-2"]);
    assert_eq!(code, exit::OK);
}

#[test]
fn run_hadamard_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "h.rqc", "qubits 1\nh 0\n");
    let (code, out, _) = rqc(&["run", &f]);
    assert_eq!(code, exit::OK);
    let probs: Vec<f64> = out.lines().map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(probs.len(), 2);
    for p in probs {
        assert!((p - 0.5).abs() <= 1e-15);
    }
}

#[test]
fn run_qft_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "qft.rqc", &emit(&qft(3)));
    let (code, out, _) = rqc(&["run", &f]);
    assert_eq!(code, exit::OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    for (i, l) in lines.iter().enumerate() {
        let (label, p) = l.split_once(' ').unwrap();
        assert_eq!(usize::from_str_radix(label, 2).unwrap(), i);
        assert!((p.parse::<f64>().unwrap() - 0.125).abs() <= 1e-9);
    }
}

#[test]
fn run_shots_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.rqc", "qubits 2\nh 0\nrx 1 0.7\n");
    let a = rqc(&["run", &f, "--shots", "1000", "--seed", "11"]);
    let b = rqc(&["run", &f, "--shots", "1000", "--seed", "11"]);
    assert_eq!(a, b);
    let total: u64 = a.1.lines().map(|l| l.split_whitespace().nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 1000);
}

#[test]
fn real_circuits_use_the_real_engine_transparently() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.rqc", "qubits 2\nh 0\ncx 0 1\n");
    let (_, out, _) = rqc(&["run", &f]);
    assert_eq!(out, "00 0.5\n01 0\n10 0\n11 0.5\n");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.rqc", "qubits 2\nh 0\ncx 0 1\nrz 1 0.3\ny 0\n");
    let a = rqc(&["verify", &f, "--init", "2"]);
    assert_eq!(a.0, exit::OK, "{}", a.1);
    assert!(a.1.starts_with("status: PASS\n"));
    assert!(a.1.contains("init: 2\n"));
    assert_eq!(a, rqc(&["verify", &f, "--init", "2"]));
}

#[test]
fn synth_examples() {
    let phi = "3.8832220774509332";
    let (code, out, _) = rqc(&["synth", "--theta", phi]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("k: 1\n"));
    assert!(out.contains("error: 0\n"));

    let (_, out, _) = rqc(&["synth", "--theta", "1.5707963267948966"]);
    assert!(out.contains("k: 646\n"), "{out}");

    let (code, _, _) = rqc(&["synth", "--theta", "-1", "--eps", "1e-15", "--k-max", "10"]);
    assert_eq!(code, exit::NOT_REACHABLE);
    let (code, _, _) = rqc(&["synth", "--theta", "1", "--eps", "0"]);
    assert_eq!(code, exit::INVALID);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "rqc.conf", "# test settings\neps = 1e-15\nk_max = 10\n");
    let (code, _, _) = rqc(&["synth", "--theta", "1", "--config", &cfg]);
    assert_eq!(code, exit::NOT_REACHABLE);
    let (code, out, _) = rqc(&["synth", "--theta", "1", "--config", &cfg, "--eps", "0.5"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("eps: 0.5\n"));

    let bad = write(dir.path(), "bad.conf", "eps = 1\nwhat = 2\n");
    let (code, _, err) = rqc(&["synth", "--theta", "1", "--config", &bad]);
    assert_eq!(code, exit::PARSE);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn bench_suite_passes() {
    let (code, out, _) = rqc(&["bench"]);
    assert_eq!(code, exit::OK, "{out}");
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with("PASS")));
    assert!(rows.iter().any(|r| r.starts_with("grover-2")));
}

#[test]
fn usage_errors() {
    assert_eq!(rqc(&[]).0, exit::INVALID);
    assert_eq!(rqc(&["run"]).0, exit::INVALID);
    assert_eq!(rqc(&["transpile", "x.rqc", "--level", "h"]).0, exit::INVALID);
    assert_eq!(rqc(&["--help"]).0, exit::OK);
    let (code, _, err) = rqc(&["run", "/nonexistent/file.rqc"]);
    assert_eq!(code, exit::PARSE);
    assert!(err.contains("/nonexistent/file.rqc"));
}
