use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use rqc_core::fmt::format_significant;
use rqc_core::synth::{synthesis_error_to_gate_error, synthesize, SynthError};
use rqc_core::text::{emit, parse, ParseErrorKind};
use rqc_core::transpile::{transpile as lower, TranspileError, TranspileReport};
use rqc_core::verify::{verify_circuit_with, VerifyError};
use rqc_core::{Angle, Circuit, ComplexState, Distribution, LoweringLevel, RealState};

use crate::{exit, Failure, Settings, Tamper};

/// Digits used when printing probabilities.
const PROBABILITY_DIGITS: usize = 15;

pub(crate) fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::new(exit::PARSE, format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| {
        let code = match e.kind {
            ParseErrorKind::Syntax => exit::PARSE,
            ParseErrorKind::Invalid => exit::INVALID,
        };
        Failure::new(code, format!("{}:{e}", path.display()))
    })
}

/// Send `text` to `--out` if given, else to `out`.
fn deliver(settings: &Settings, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let written = match &settings.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    written.map_err(|e| Failure::new(exit::PARSE, e))
}

pub(crate) fn transpile_failure(e: &TranspileError) -> Failure {
    let code = match e {
        TranspileError::Synthesis { error: SynthError::NotReachable { .. }, .. } => exit::NOT_REACHABLE,
        _ => exit::INVALID,
    };
    Failure::new(code, e.to_string())
}

fn report_lines(c: &Circuit, rep: &TranspileReport, settings: &Settings) -> String {
    let (one, two, phase) = c.arity_counts();
    let mut s = String::new();
    let _ = writeln!(s, "# level: {}", rep.level);
    let _ = writeln!(s, "# input gates: {} (1q {one}, 2q {two}, phase {phase})", rep.input_gates);
    let _ = writeln!(s, "# normalized gates: {} (phase {})", rep.normalized_gates, rep.phase_items);
    let _ = writeln!(s, "# l1 gates: {}", rep.l1_gates);
    if let Some(n) = rep.l2_gates {
        let _ = writeln!(s, "# l2 gates: {n}");
    }
    if let Some(n) = rep.l3_gates {
        let _ = writeln!(s, "# l3 gates: {n}");
    }
    let _ = writeln!(s, "# ri ancilla: {}", rep.layout.ri_ancilla);
    if let Some(w) = rep.layout.work_ancilla {
        let _ = writeln!(s, "# work ancilla: {w}");
    }
    let _ = writeln!(s, "# encoded init for input basis {}: {}", settings.init, rep.layout.encoded_basis(settings.init));
    if rep.level == LoweringLevel::GOnly {
        let _ = writeln!(s, "# phi: {}", settings.synth.phi);
        for g in &rep.synthesis {
            let _ = writeln!(
                s,
                "# synth gate {} (input gate {}): theta {} k {} error {}",
                g.index,
                g.source_index,
                g.target,
                g.result.k,
                format_significant(g.result.error, 6),
            );
        }
        let _ = writeln!(s, "# max k: {}", rep.max_k());
        let _ = writeln!(s, "# budget: {}", format_significant(rep.budget.unwrap_or(0.0), 17));
    }
    s
}

pub(crate) fn transpile(input: &Path, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = read_circuit(input)?;
    if settings.init >> c.num_qubits != 0 {
        return Err(Failure::new(exit::INVALID, format!("init {} is outside a {}-qubit register", settings.init, c.num_qubits)));
    }
    let (lowered, rep) = lower(&c, settings.level.lowering(), &settings.synth).map_err(|e| transpile_failure(&e))?;
    let circuit = emit(&lowered);
    let report = report_lines(&c, &rep, settings);
    if settings.out.is_some() {
        deliver(settings, &circuit, out)?;
        out.write_all(report.as_bytes()).map_err(|e| Failure::new(exit::PARSE, e.to_string()))?;
    } else {
        deliver(settings, &(circuit + &report), out)?;
    }
    Ok(exit::OK)
}

fn basis_label(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

pub(crate) fn simulate(c: &Circuit, init: usize) -> Result<Distribution, Failure> {
    let invalid = |e: rqc_core::sim::SimError| Failure::new(exit::INVALID, e.to_string());
    if c.is_real() {
        Ok(RealState::basis(c.num_qubits, init).map_err(invalid)?.run(c).map_err(invalid)?.distribution())
    } else {
        Ok(ComplexState::basis(c.num_qubits, init).map_err(invalid)?.run(c).map_err(invalid)?.distribution())
    }
}

pub(crate) fn run(input: &Path, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = read_circuit(input)?;
    let dist = simulate(&c, settings.init)?;
    let n = c.num_qubits;
    let mut text = String::new();
    if settings.shots == 0 {
        for (i, p) in dist.probabilities().iter().enumerate() {
            let _ = writeln!(text, "{} {}", basis_label(i, n), format_significant(*p, PROBABILITY_DIGITS));
        }
    } else {
        for (i, k) in dist.sample(settings.shots, settings.seed).iter().enumerate() {
            let _ = writeln!(text, "{} {k}", basis_label(i, n));
        }
    }
    deliver(settings, &text, out)?;
    Ok(exit::OK)
}

pub(crate) fn verify(input: &Path, settings: &Settings, out: &mut dyn Write, tamper: Tamper<'_>) -> Result<i32, Failure> {
    let c = read_circuit(input)?;
    let report = verify_circuit_with(&c, settings.init, &settings.synth, |level, lowered| tamper(level, lowered))
        .map_err(|e| match e {
            VerifyError::Transpile(t) => transpile_failure(&t),
            other => Failure::new(exit::INVALID, other.to_string()),
        })?;
    deliver(settings, &report.to_text(), out)?;
    Ok(if report.passed() { exit::OK } else { exit::VERIFY_FAILED })
}

pub(crate) fn synth(theta: f64, settings: &Settings, out: &mut dyn Write) -> Result<i32, Failure> {
    if !theta.is_finite() {
        return Err(Failure::new(exit::INVALID, "theta must be finite"));
    }
    let r = synthesize(Angle::new(theta), &settings.synth).map_err(|e| {
        let code = if matches!(e, SynthError::NotReachable { .. }) { exit::NOT_REACHABLE } else { exit::INVALID };
        Failure::new(code, e.to_string())
    })?;
    let mut text = String::new();
    let _ = writeln!(text, "theta: {}", Angle::new(theta));
    let _ = writeln!(text, "phi: {}", settings.synth.phi);
    let _ = writeln!(text, "eps: {}", format_significant(settings.synth.eps, 17));
    let _ = writeln!(text, "k: {}", r.k);
    let _ = writeln!(text, "achieved: {}", r.achieved);
    let _ = writeln!(text, "error: {}", format_significant(r.error, 17));
    let _ = writeln!(text, "gate_error: {}", format_significant(synthesis_error_to_gate_error(r.error), 17));
    deliver(settings, &text, out)?;
    Ok(exit::OK)
}
