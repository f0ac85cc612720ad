use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rqc_core::encoding::{encode_with, marginal_distribution};
use rqc_core::fmt::format_significant;
use rqc_core::library::{grover2, qft, random_circuit};
use rqc_core::transpile::{transpile, TranspileReport};
use rqc_core::verify::{verify_circuit, EXACT_TOLERANCE};
use rqc_core::{Circuit, ComplexState, LoweringLevel, SynthConfig};

use crate::{exit, Failure, Settings};

/// Gates per random suite circuit.
const RANDOM_LEN: usize = 20;
/// Marked state of the Grover row.
const GROVER_MARKED: usize = 3;

struct Row {
    name: String,
    qubits: usize,
    input: usize,
    gates: [Option<usize>; 3],
    max_k: u64,
    budget: f64,
    millis: [f64; 4],
    problems: Vec<String>,
}

fn suite(seed: u64) -> Vec<(Circuit, Option<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Circuit, Option<usize>)> = (2..=8)
        .map(|n| {
            let mut c = random_circuit(&mut rng, n, RANDOM_LEN);
            c.name = Some(format!("random-{n}"));
            (c, None)
        })
        .collect();
    out.push((qft(3), None));
    let mut grover = grover2(GROVER_MARKED);
    grover.name = Some("grover-2".into());
    out.push((grover, Some(GROVER_MARKED)));
    out
}

/// Probability of `marked` on the data register after running `lowered`
/// from encoded `|0…0⟩`.
fn marked_probability(lowered: &Circuit, rep: &TranspileReport, data: usize, marked: usize) -> Result<f64, String> {
    let start = ComplexState::basis(data, 0).map_err(|e| e.to_string())?;
    let state = encode_with(&start, &rep.layout).map_err(|e| e.to_string())?;
    let out = state.run(lowered).map_err(|e| e.to_string())?;
    let m = marginal_distribution(&out, &rep.layout).map_err(|e| e.to_string())?;
    Ok(m.probabilities()[marked])
}

fn bench_row(c: &Circuit, marked: Option<usize>, cfg: &SynthConfig) -> Row {
    let (one, two, _) = c.arity_counts();
    let mut row = Row {
        name: c.name.clone().unwrap_or_default(),
        qubits: c.num_qubits,
        input: c.len(),
        gates: [None; 3],
        max_k: 0,
        budget: 0.0,
        millis: [0.0; 4],
        problems: Vec::new(),
    };
    for (i, level) in LoweringLevel::ALL.into_iter().enumerate() {
        let start = Instant::now();
        let lowered = transpile(c, level, cfg);
        row.millis[i] = start.elapsed().as_secs_f64() * 1e3;
        let (lowered, rep) = match lowered {
            Ok(r) => r,
            Err(e) => {
                row.problems.push(format!("{level}: {e}"));
                continue;
            }
        };
        row.gates[i] = Some(lowered.len());
        if level == LoweringLevel::RealEncoded && rep.l1_gates > 3 * one + two + rep.phase_items {
            row.problems.push(format!("l1 gate count {} over bound", rep.l1_gates));
        }
        if let Some(b) = rep.budget {
            row.budget = b;
            row.max_k = rep.max_k();
        }
        if let Some(marked) = marked {
            let slack = 2.0 * rep.budget.unwrap_or(0.0) + EXACT_TOLERANCE;
            match marked_probability(&lowered, &rep, c.num_qubits, marked) {
                Ok(p) if (1.0 - p).abs() <= slack => {}
                Ok(p) => row.problems.push(format!("{level}: marked probability {p}")),
                Err(e) => row.problems.push(format!("{level}: {e}")),
            }
        }
    }
    let start = Instant::now();
    match verify_circuit(c, 0, cfg) {
        Ok(r) if r.passed() => {}
        Ok(r) => row.problems.extend(r.stages.iter().flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.level)))),
        Err(e) => row.problems.push(format!("verify: {e}")),
    }
    row.millis[3] = start.elapsed().as_secs_f64() * 1e3;
    row
}

pub(crate) fn bench(settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let rows: Vec<Row> = suite(settings.seed).iter().map(|(c, marked)| bench_row(c, *marked, &settings.synth)).collect();
    let count = |g: Option<usize>| g.map_or_else(|| "-".to_string(), |n| n.to_string());
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<12} {:>6} {:>5} {:>6} {:>6} {:>9} {:>6} {:>12} {:>9} {:>9} {:>9} {:>9}  status",
        "circuit", "qubits", "in", "l1", "l2", "l3", "max_k", "budget", "l1_ms", "l2_ms", "l3_ms", "verify_ms"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:<12} {:>6} {:>5} {:>6} {:>6} {:>9} {:>6} {:>12} {:>9.2} {:>9.2} {:>9.2} {:>9.2}  {}",
            r.name,
            r.qubits,
            r.input,
            count(r.gates[0]),
            count(r.gates[1]),
            count(r.gates[2]),
            r.max_k,
            format_significant(r.budget, 6),
            r.millis[0],
            r.millis[1],
            r.millis[2],
            r.millis[3],
            if r.problems.is_empty() { "PASS" } else { "FAIL" },
        );
    }
    for r in &rows {
        for p in &r.problems {
            let _ = writeln!(text, "# {}: {p}", r.name);
        }
    }
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(exit::PARSE, e.to_string()))?;
    Ok(if rows.iter().all(|r| r.problems.is_empty()) { exit::OK } else { exit::VERIFY_FAILED })
}
