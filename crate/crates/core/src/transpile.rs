//! Lowering pipeline from arbitrary circuits to real-amplitude circuits.
//!
//! * `normalize_pass` rewrites everything into `{Rz, Ry, F, GPhase}`.
//! * `encode_pass` adds the R-I ancilla: `Rz(τ)@q` becomes `F(τ)` controlled
//!   on `q` targeting the ancilla, `GPhase(α)` becomes `Ry(α)` on the
//!   ancilla, and real gates pass through unchanged.
//! * `lower_ry_pass` turns `Ry(τ)@q` into `F(τ)` controlled by a work
//!   ancilla held in `|1⟩`.
//! * The fixed-gate stage replaces each `F(θ)` by `k` copies of `F(φ)`.
//!
//! Everything up to the fixed-gate stage is exact; only the last stage
//! introduces (budgeted) error.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::angle::Angle;
use crate::circuit::{Circuit, Violation};
use crate::encoding::{global_phase_gate, EncodedLayout};
use crate::gate::{gate_matrix, zyz_normalize, Gate, GateKind, Operands};
use crate::synth::{self, SynthConfig, SynthError, SynthesisResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoweringLevel {
    /// Real gates only, data qubits plus the R-I ancilla.
    RealEncoded,
    /// `F` gates only, with the work ancilla added.
    FOnly,
    /// `F(φ)` only.
    GOnly,
}

impl LoweringLevel {
    pub const ALL: [LoweringLevel; 3] = [LoweringLevel::RealEncoded, LoweringLevel::FOnly, LoweringLevel::GOnly];

    /// Short tag used on the command line and in reports.
    pub fn tag(self) -> &'static str {
        match self {
            LoweringLevel::RealEncoded => "l1",
            LoweringLevel::FOnly => "l2",
            LoweringLevel::GOnly => "l3",
        }
    }

    pub fn layout(self, num_data: usize) -> EncodedLayout {
        match self {
            LoweringLevel::RealEncoded => EncodedLayout::real(num_data),
            _ => EncodedLayout::with_work(num_data),
        }
    }
}

impl fmt::Display for LoweringLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TranspileError {
    #[error("invalid circuit: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidCircuit(Vec<Violation>),
    #[error("{pass}: unsupported gate `{gate}` at position {index}")]
    UnsupportedGate { pass: &'static str, index: usize, gate: String },
    #[error("{pass}: layout has no work ancilla")]
    MissingWorkAncilla { pass: &'static str },
    #[error("synthesis configuration: {0}")]
    Config(SynthError),
    #[error("synthesis failed for gate {index} (from input gate {source_index}): {error}")]
    Synthesis { index: usize, source_index: usize, error: SynthError },
}

/// A gate together with the input position it was derived from.
#[derive(Clone, Copy, Debug)]
struct Tagged {
    source: usize,
    gate: Gate,
}

fn untag(num_qubits: usize, gates: &[Tagged]) -> Circuit {
    Circuit::with_gates(num_qubits, gates.iter().map(|t| t.gate).collect())
}

fn tag_all(c: &Circuit) -> Vec<Tagged> {
    c.gates.iter().enumerate().map(|(source, &gate)| Tagged { source, gate }).collect()
}

/// `Rz(c)`, `Ry(b)`, `Rz(a)`, `GPhase(α)` in application order, skipping
/// exact-zero components.
fn zyz_gates(g: &Gate) -> Vec<Gate> {
    let q = g.qubit().expect("single-qubit gate");
    let z = zyz_normalize(g);
    let mut out = Vec::with_capacity(4);
    if z.c.radians() != 0.0 {
        out.push(Gate::rz(q, z.c));
    }
    if z.b.radians() != 0.0 {
        out.push(Gate::ry(q, z.b));
    }
    if z.a.radians() != 0.0 {
        out.push(Gate::rz(q, z.a));
    }
    if z.alpha.radians() != 0.0 {
        out.push(Gate::gphase(z.alpha));
    }
    out
}

/// `CX` and `CZ` in terms of single-qubit gates and `F(π/2)`.
///
/// `F(π/2)` applies `[[0,-1],[1,0]] = -iY` to the target. Conjugating by
/// `S` turns that into `-iX`, and a phase of `i` on the control (`Rz(π/2)`)
/// completes `CX`. `CZ` is `CX` conjugated by `H` on the target.
fn two_qubit_front_end(kind: GateKind, control: usize, target: usize) -> Vec<Gate> {
    let cx = [
        Gate::s(target),
        Gate::f(control, target, FRAC_PI_2),
        Gate::sdg(target),
        Gate::rz(control, FRAC_PI_2),
    ];
    match kind {
        GateKind::Cx => cx.to_vec(),
        GateKind::Cz => {
            let mut v = vec![Gate::h(target)];
            v.extend(cx);
            v.push(Gate::h(target));
            v
        }
        _ => unreachable!("{kind} has no two-qubit expansion"),
    }
}

fn normalize_gate(g: &Gate, out: &mut Vec<Gate>) {
    match g.kind {
        GateKind::F => out.push(*g),
        GateKind::GPhase => {
            if g.angle().radians() != 0.0 {
                out.push(*g);
            }
        }
        GateKind::Cx | GateKind::Cz => {
            let (c, t) = g.control_target().expect("two-qubit gate");
            for h in two_qubit_front_end(g.kind, c, t) {
                normalize_gate(&h, out);
            }
        }
        _ => out.extend(zyz_gates(g)),
    }
}

/// Expansion of `CX`/`CZ` over `{Rz, Ry, F(π/2), GPhase}`, checked once
/// against the exact 4×4 matrix. A mismatch is a bug, so it panics.
fn verified_expansion(kind: GateKind, control: usize, target: usize) -> Vec<Gate> {
    static CHECKED: OnceLock<()> = OnceLock::new();
    CHECKED.get_or_init(|| {
        for k in [GateKind::Cx, GateKind::Cz] {
            let mut gates = Vec::new();
            // Control on qubit 1 so the register index reads |control target⟩.
            normalize_gate(&Gate { kind: k, operands: Operands::Two { control: 1, target: 0 }, param: None }, &mut gates);
            let got = crate::sim::unitary(&Circuit::with_gates(2, gates)).expect("2-qubit unitary");
            let want = gate_matrix(&Gate { kind: k, operands: Operands::Two { control: 1, target: 0 }, param: None });
            let diff = got.max_abs_diff(&want);
            assert!(diff <= 1e-12, "{k} expansion deviates from its matrix by {diff:e}");
        }
    });
    let mut out = Vec::new();
    normalize_gate(&Gate { kind, operands: Operands::Two { control, target }, param: None }, &mut out);
    out
}

fn normalize_tagged(gates: &[Tagged], keep_real: bool) -> Vec<Tagged> {
    let mut out = Vec::with_capacity(gates.len() * 2);
    let mut buf = Vec::new();
    for t in gates {
        let g = &t.gate;
        buf.clear();
        let passes = keep_real && g.is_real() && !matches!(g.kind, GateKind::Rz | GateKind::GPhase);
        if passes {
            buf.push(*g);
        } else if matches!(g.kind, GateKind::Cx | GateKind::Cz) {
            let (c, tq) = g.control_target().expect("two-qubit gate");
            buf.extend(verified_expansion(g.kind, c, tq));
        } else {
            normalize_gate(g, &mut buf);
        }
        out.extend(buf.iter().map(|&gate| Tagged { source: t.source, gate }));
    }
    out
}

/// Rewrite into `{Rz, Ry, F, GPhase}` with the same unitary, phase included.
pub fn normalize_pass(c: &Circuit) -> Circuit {
    untag(c.num_qubits, &normalize_tagged(&tag_all(c), false))
}

fn encode_tagged(gates: &[Tagged], layout: &EncodedLayout) -> Result<Vec<Tagged>, TranspileError> {
    gates
        .iter()
        .enumerate()
        .map(|(index, t)| {
            let g = &t.gate;
            let gate = match (g.kind, g.operands) {
                (GateKind::Rz, Operands::One(q)) => Gate::f(q, layout.ri_ancilla, g.angle()),
                (GateKind::GPhase, _) => global_phase_gate(g.angle(), layout),
                _ if g.is_real() => *g,
                _ => {
                    return Err(TranspileError::UnsupportedGate { pass: "encode", index, gate: g.to_string() })
                }
            };
            Ok(Tagged { source: t.source, gate })
        })
        .collect()
}

/// Map a circuit over `{Rz, GPhase}` plus real gates onto the encoded
/// register (data qubits plus the R-I ancilla).
pub fn encode_pass(c: &Circuit, layout: &EncodedLayout) -> Result<Circuit, TranspileError> {
    let gates = encode_tagged(&tag_all(c), layout)?;
    Ok(untag(layout.num_data + 1, &gates))
}

fn lower_tagged(gates: &[Tagged], layout: &EncodedLayout) -> Result<Vec<Tagged>, TranspileError> {
    let work = layout.work_ancilla.ok_or(TranspileError::MissingWorkAncilla { pass: "lower-ry" })?;
    gates
        .iter()
        .enumerate()
        .map(|(index, t)| {
            let g = &t.gate;
            let gate = match (g.kind, g.operands) {
                (GateKind::Ry, Operands::One(q)) => Gate::f(work, q, g.angle()),
                (GateKind::F, _) => *g,
                _ => {
                    return Err(TranspileError::UnsupportedGate { pass: "lower-ry", index, gate: g.to_string() })
                }
            };
            Ok(Tagged { source: t.source, gate })
        })
        .collect()
}

/// Replace every `Ry(τ)@q` by `F(τ)` controlled on the work ancilla.
/// The input must contain only `Ry` and `F`.
pub fn lower_ry_pass(c: &Circuit, layout: &EncodedLayout) -> Result<Circuit, TranspileError> {
    let gates = lower_tagged(&tag_all(c), layout)?;
    Ok(untag(layout.num_qubits(), &gates))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSynthesis {
    /// Position of the replaced `F` gate in the F-only circuit.
    pub index: usize,
    /// Position of the input gate it came from.
    pub source_index: usize,
    pub target: Angle,
    pub result: SynthesisResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranspileReport {
    pub level: LoweringLevel,
    pub layout: EncodedLayout,
    pub input_gates: usize,
    /// Gates after normalization (pass-through real gates kept at L1).
    pub normalized_gates: usize,
    /// Phase items among the normalized gates.
    pub phase_items: usize,
    pub l1_gates: usize,
    pub l2_gates: Option<usize>,
    pub l3_gates: Option<usize>,
    pub synthesis: Vec<GateSynthesis>,
    /// `Σ 2|sin(Δ_i/2)|` over synthesized gates; only at the fixed-gate level.
    pub budget: Option<f64>,
}

impl TranspileReport {
    pub fn max_k(&self) -> u64 {
        self.synthesis.iter().map(|s| s.result.k).max().unwrap_or(0)
    }

    pub fn output_gates(&self) -> usize {
        match self.level {
            LoweringLevel::RealEncoded => self.l1_gates,
            LoweringLevel::FOnly => self.l2_gates.unwrap_or(0),
            LoweringLevel::GOnly => self.l3_gates.unwrap_or(0),
        }
    }
}

fn synthesize_tagged(
    gates: &[Tagged],
    cfg: &SynthConfig,
) -> Result<(Vec<Gate>, Vec<GateSynthesis>), TranspileError> {
    let mut cache: HashMap<u64, SynthesisResult> = HashMap::new();
    let mut out = Vec::new();
    let mut report = Vec::with_capacity(gates.len());
    for (index, t) in gates.iter().enumerate() {
        let (control, target) = t.gate.control_target().expect("F-only circuit");
        let theta = t.gate.angle();
        let result = match cache.get(&theta.radians().to_bits()) {
            Some(r) => *r,
            None => {
                let r = synth::synthesize(theta, cfg).map_err(|error| TranspileError::Synthesis {
                    index,
                    source_index: t.source,
                    error,
                })?;
                cache.insert(theta.radians().to_bits(), r);
                r
            }
        };
        let g = Gate::f(control, target, cfg.phi);
        out.extend(std::iter::repeat_n(g, result.k as usize));
        report.push(GateSynthesis { index, source_index: t.source, target: theta, result });
    }
    Ok((out, report))
}

/// Lower `c` to `level`. The synthesis configuration is only consulted
/// for [`LoweringLevel::GOnly`].
pub fn transpile(
    c: &Circuit,
    level: LoweringLevel,
    cfg: &SynthConfig,
) -> Result<(Circuit, TranspileReport), TranspileError> {
    c.validate().map_err(TranspileError::InvalidCircuit)?;
    if level == LoweringLevel::GOnly {
        cfg.validate().map_err(TranspileError::Config)?;
    }
    let n = c.num_qubits;
    let layout = level.layout(n);
    let input = tag_all(c);

    let normalized = normalize_tagged(&input, level == LoweringLevel::RealEncoded);
    let phase_items = normalized.iter().filter(|t| t.gate.kind == GateKind::GPhase).count();
    let l1 = encode_tagged(&normalized, &layout)?;
    let mut report = TranspileReport {
        level,
        layout,
        input_gates: c.len(),
        normalized_gates: normalized.len(),
        phase_items,
        l1_gates: l1.len(),
        l2_gates: None,
        l3_gates: None,
        synthesis: Vec::new(),
        budget: None,
    };
    if level == LoweringLevel::RealEncoded {
        return Ok((untag(n + 1, &l1), report));
    }

    let l2 = lower_tagged(&l1, &layout)?;
    report.l2_gates = Some(l2.len());
    if level == LoweringLevel::FOnly {
        return Ok((untag(layout.num_qubits(), &l2), report));
    }

    let (l3, synthesis) = synthesize_tagged(&l2, cfg)?;
    let errors: Vec<f64> = synthesis.iter().map(|s| s.result.error).collect();
    report.l3_gates = Some(l3.len());
    report.budget = Some(synth::certified_budget(&errors, l3.len() as u64));
    report.synthesis = synthesis;
    Ok((Circuit::with_gates(layout.num_qubits(), l3), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{decode, encode, encode_with};
    use crate::sim::{unitary, ComplexState, RealState};
    use std::f64::consts::PI;

    #[test]
    fn ry_is_unchanged() {
        let c = Circuit::with_gates(1, vec![Gate::ry(0, 0.3)]);
        assert_eq!(normalize_pass(&c), c);
    }

    #[test]
    fn x_becomes_rz_then_ry() {
        let c = Circuit::with_gates(1, vec![Gate::x(0)]);
        let n = normalize_pass(&c);
        assert_eq!(n.gates, vec![Gate::rz(0, PI), Gate::ry(0, PI / 2.0)]);
        assert!(unitary(&n).unwrap().max_abs_diff(&unitary(&c).unwrap()) < 1e-15);
    }

    #[test]
    fn cx_and_cz_expansions_match() {
        for (kind, c, t) in [(GateKind::Cx, 1, 0), (GateKind::Cx, 0, 1), (GateKind::Cz, 1, 0), (GateKind::Cz, 0, 1)] {
            let g = Gate { kind, operands: Operands::Two { control: c, target: t }, param: None };
            let src = Circuit::with_gates(2, vec![g]);
            let n = normalize_pass(&src);
            assert!(n.gates.iter().all(|g| matches!(g.kind, GateKind::Rz | GateKind::Ry | GateKind::F | GateKind::GPhase)));
            assert!(n.gates.iter().filter(|g| g.kind == GateKind::F).all(|g| g.angle().radians() == FRAC_PI_2));
            assert!(unitary(&n).unwrap().max_abs_diff(&unitary(&src).unwrap()) < 1e-12, "{kind} {c}->{t}");
        }
    }

    #[test]
    fn rz_rule_at_l1() {
        let c = Circuit::with_gates(1, vec![Gate::rz(0, FRAC_PI_2)]);
        let (l1, rep) = transpile(&c, LoweringLevel::RealEncoded, &SynthConfig::default()).unwrap();
        assert_eq!(l1, Circuit::with_gates(2, vec![Gate::f(0, 1, FRAC_PI_2)]));
        assert_eq!(rep.l1_gates, 1);
    }

    #[test]
    fn rz_rule_rotates_phase_of_one() {
        let (r1, th1, tau) = (0.6f64, 0.4f64, 1.1f64);
        let s = ComplexState::from_amplitudes(vec![
            num_complex::Complex64::new(0.8, 0.0),
            num_complex::Complex64::from_polar(r1, th1),
        ])
        .unwrap();
        let layout = EncodedLayout::real(1);
        let l1 = encode_pass(&Circuit::with_gates(1, vec![Gate::rz(0, tau)]), &layout).unwrap();
        let out = encode(&s).run(&l1).unwrap();
        let a = out.amplitudes();
        assert!((a[layout.real_index(1)] - r1 * (th1 + tau).cos()).abs() < 1e-15);
        assert!((a[layout.imag_index(1)] - r1 * (th1 + tau).sin()).abs() < 1e-15);
        assert_eq!((a[layout.real_index(0)], a[layout.imag_index(0)]), (0.8, 0.0));
    }

    #[test]
    fn f_passes_through() {
        let c = Circuit::with_gates(2, vec![Gate::f(0, 1, FRAC_PI_2)]);
        let l1 = encode_pass(&c, &EncodedLayout::real(2)).unwrap();
        assert_eq!(l1.gates, c.gates);
        assert_eq!(l1.num_qubits, 3);
    }

    #[test]
    fn encode_rejects_complex_gates() {
        let c = Circuit::with_gates(1, vec![Gate::s(0)]);
        assert!(matches!(
            encode_pass(&c, &EncodedLayout::real(1)),
            Err(TranspileError::UnsupportedGate { pass: "encode", index: 0, .. })
        ));
    }

    #[test]
    fn lower_ry_examples() {
        let layout = EncodedLayout::with_work(3);
        let c = Circuit::with_gates(4, vec![Gate::ry(2, 0.7)]);
        assert_eq!(lower_ry_pass(&c, &layout).unwrap().gates, vec![Gate::f(4, 2, 0.7)]);
        let only_f = Circuit::with_gates(4, vec![Gate::f(0, 3, 0.2)]);
        assert_eq!(lower_ry_pass(&only_f, &layout).unwrap().gates, only_f.gates);
        let bad = Circuit::with_gates(4, vec![Gate::h(0)]);
        assert!(lower_ry_pass(&bad, &layout).is_err());
        assert!(matches!(lower_ry_pass(&c, &EncodedLayout::real(3)), Err(TranspileError::MissingWorkAncilla { .. })));
    }

    #[test]
    fn empty_circuit_every_level() {
        let c = Circuit::new(2);
        for level in LoweringLevel::ALL {
            let (out, rep) = transpile(&c, level, &SynthConfig::default()).unwrap();
            assert!(out.is_empty());
            assert_eq!(out.num_qubits, rep.layout.num_qubits());
        }
    }

    #[test]
    fn ry_phi_is_one_g() {
        let cfg = SynthConfig::default();
        let c = Circuit::with_gates(1, vec![Gate::ry(0, cfg.phi)]);
        let (out, rep) = transpile(&c, LoweringLevel::GOnly, &cfg).unwrap();
        assert_eq!(out.gates, vec![Gate::f(2, 0, cfg.phi)]);
        assert_eq!(rep.synthesis[0].result.k, 1);
        assert_eq!(rep.budget, Some(synth::ROUNDING_PER_GATE));
    }

    #[test]
    fn synthesis_failure_names_gate() {
        let cfg = SynthConfig { eps: 1e-15, k_max: 10, ..SynthConfig::default() };
        let c = Circuit::with_gates(1, vec![Gate::h(0), Gate::ry(0, 1.0)]);
        match transpile(&c, LoweringLevel::GOnly, &cfg) {
            Err(TranspileError::Synthesis { source_index, error: SynthError::NotReachable { .. }, .. }) => {
                assert_eq!(source_index, 0)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn l2_matches_l1_on_subspace() {
        let c = Circuit::with_gates(
            2,
            vec![Gate::h(0), Gate::t(1), Gate::cx(0, 1), Gate::rx(1, 0.3), Gate::y(0), Gate::cz(1, 0)],
        );
        let reference = ComplexState::basis(2, 1).unwrap().run(&c).unwrap();
        let cfg = SynthConfig::default();
        for level in [LoweringLevel::RealEncoded, LoweringLevel::FOnly] {
            let (out, rep) = transpile(&c, level, &cfg).unwrap();
            assert!(out.is_real());
            let init = encode_with(&ComplexState::basis(2, 1).unwrap(), &rep.layout).unwrap();
            let got = decode(&RealState::run(init, &out).unwrap(), &rep.layout).unwrap();
            assert!(got.distance(&reference) < 1e-12, "{level}");
        }
    }
}
