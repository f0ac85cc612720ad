//! Stage-by-stage equivalence checking.
//!
//! The input circuit runs on the complex engine. Each lowered circuit runs
//! on the real engine from the encoded input. Both are compared after
//! decoding: the statevector ℓ2 distance includes global phase, and the
//! total-variation distance compares the data-qubit marginals.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::encoding::{decode, encode_with, marginal_distribution, EncodedLayout};
use crate::gate::GateKind;
use crate::sim::{ComplexState, Distribution, RealState, SimError};
use crate::synth::SynthConfig;
use crate::text::emit;
use crate::transpile::{transpile, LoweringLevel, TranspileError};

/// Threshold for the exact stages (L1, L2), on both ℓ2 and TV distance.
pub const EXACT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("distributions have {0} and {1} outcomes")]
    DimensionMismatch(usize, usize),
}

/// `½ Σ |p_j − q_j|`.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> Result<f64, VerifyError> {
    if p.len() != q.len() {
        return Err(VerifyError::DimensionMismatch(p.len(), q.len()));
    }
    Ok(0.5 * p.probabilities().iter().zip(q.probabilities()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub level: LoweringLevel,
    pub gates: usize,
    /// `None` when the stage could not be simulated.
    pub l2_distance: Option<f64>,
    pub tv_distance: Option<f64>,
    pub failures: Vec<String>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub digest: String,
    pub num_qubits: usize,
    pub input_gates: usize,
    pub init: usize,
    pub synth: SynthConfig,
    pub stages: Vec<StageReport>,
    pub budget: f64,
    pub max_k: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(StageReport::passed)
    }

    pub fn stage(&self, level: LoweringLevel) -> &StageReport {
        self.stages.iter().find(|s| s.level == level).expect("every level is verified")
    }

    /// `key: value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        let num = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6e}"));
        let mut out = String::new();
        let _ = writeln!(out, "status: {}", if self.passed() { "PASS" } else { "FAIL" });
        let _ = writeln!(out, "digest: {}", self.digest);
        let _ = writeln!(out, "qubits: {}", self.num_qubits);
        let _ = writeln!(out, "gates: {}", self.input_gates);
        let _ = writeln!(out, "init: {}", self.init);
        let _ = writeln!(out, "phi: {}", self.synth.phi);
        let _ = writeln!(out, "eps: {:e}", self.synth.eps);
        let _ = writeln!(out, "k_max: {}", self.synth.k_max);
        for s in &self.stages {
            let tag = s.level.tag();
            let _ = writeln!(out, "{tag}.gates: {}", s.gates);
            let _ = writeln!(out, "{tag}.l2_distance: {}", num(s.l2_distance));
            let _ = writeln!(out, "{tag}.tv_distance: {}", num(s.tv_distance));
            if s.level == LoweringLevel::GOnly {
                let _ = writeln!(out, "{tag}.budget: {:.6e}", self.budget);
                let _ = writeln!(out, "{tag}.max_k: {}", self.max_k);
            }
            let _ = writeln!(out, "{tag}.status: {}", if s.passed() { "PASS" } else { "FAIL" });
        }
        let reasons: Vec<String> = self
            .stages
            .iter()
            .flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.level.tag())))
            .collect();
        if reasons.is_empty() {
            let _ = writeln!(out, "reason: none");
        }
        for r in reasons {
            let _ = writeln!(out, "reason: {r}");
        }
        out
    }
}

pub fn circuit_digest(c: &Circuit) -> String {
    let hash = Sha256::digest(emit(c).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Check that every gate fits the level's gate set.
fn level_shape_failures(level: LoweringLevel, c: &Circuit, synth: &SynthConfig) -> Vec<String> {
    let bad = match level {
        LoweringLevel::RealEncoded => c.gates.iter().position(|g| !g.is_real()),
        LoweringLevel::FOnly => c.gates.iter().position(|g| g.kind != GateKind::F),
        LoweringLevel::GOnly => c.gates.iter().position(|g| g.kind != GateKind::F || g.angle() != synth.phi),
    };
    bad.map(|i| vec![format!("gate {i} (`{}`) is outside the {level} gate set", c.gates[i])]).unwrap_or_default()
}

fn check_stage(
    level: LoweringLevel,
    lowered: &Circuit,
    layout: &EncodedLayout,
    init: &ComplexState,
    reference: &ComplexState,
    threshold: f64,
    synth: &SynthConfig,
) -> StageReport {
    let mut report = StageReport {
        level,
        gates: lowered.len(),
        l2_distance: None,
        tv_distance: None,
        failures: level_shape_failures(level, lowered, synth),
    };
    let start = match encode_with(init, layout) {
        Ok(s) => s,
        Err(e) => {
            report.failures.push(e.to_string());
            return report;
        }
    };
    let out = match RealState::run(start, lowered) {
        Ok(s) => s,
        Err(e) => {
            report.failures.push(format!("simulation failed: {e}"));
            return report;
        }
    };
    if let Ok(state) = decode(&out, layout) {
        let d = state.distance(reference);
        report.l2_distance = Some(d);
        if d.is_nan() || d > threshold {
            let what = if level == LoweringLevel::GOnly { "budget violated" } else { "state mismatch" };
            report.failures.push(format!("{what}: l2 distance {d:e} exceeds {threshold:e}"));
        }
    }
    match marginal_distribution(&out, layout) {
        Ok(m) => {
            let tv = tv_distance(&m, &reference.distribution()).expect("same data register");
            report.tv_distance = Some(tv);
            if level != LoweringLevel::GOnly && (tv.is_nan() || tv > EXACT_TOLERANCE) {
                report.failures.push(format!("distribution mismatch: tv distance {tv:e}"));
            }
        }
        Err(e) => report.failures.push(e.to_string()),
    }
    report
}

/// Verify all three lowering levels of `c` from basis input `init`.
pub fn verify_circuit(c: &Circuit, init: usize, synth: &SynthConfig) -> Result<VerificationReport, VerifyError> {
    verify_circuit_with(c, init, synth, |_, _| {})
}

/// As [`verify_circuit`], but lets the caller alter each lowered circuit
/// before it is simulated. Used for negative controls.
pub fn verify_circuit_with(
    c: &Circuit,
    init: usize,
    synth: &SynthConfig,
    mut tamper: impl FnMut(LoweringLevel, &mut Circuit),
) -> Result<VerificationReport, VerifyError> {
    c.validate().map_err(|v| VerifyError::Transpile(TranspileError::InvalidCircuit(v)))?;
    let init_state = ComplexState::basis(c.num_qubits, init)?;
    let reference = init_state.clone().run(c)?;

    let mut stages = Vec::with_capacity(3);
    let mut budget = 0.0;
    let mut max_k = 0;
    for level in LoweringLevel::ALL {
        let (mut lowered, report) = transpile(c, level, synth)?;
        tamper(level, &mut lowered);
        let threshold = match report.budget {
            Some(b) => {
                budget = b;
                max_k = report.max_k();
                // The exact stages' rounding floor still applies underneath the budget.
                b + EXACT_TOLERANCE
            }
            None => EXACT_TOLERANCE,
        };
        stages.push(check_stage(level, &lowered, &report.layout, &init_state, &reference, threshold, synth));
    }
    Ok(VerificationReport {
        digest: circuit_digest(c),
        num_qubits: c.num_qubits,
        input_gates: c.len(),
        init,
        synth: *synth,
        stages,
        budget,
        max_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tv_examples() {
        let p = Distribution::new(vec![1.0, 0.0]);
        let q = Distribution::new(vec![0.0, 1.0]);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(tv_distance(&p, &q).unwrap(), 1.0);
        assert!(tv_distance(&p, &Distribution::new(vec![1.0])).is_err());
    }

    #[test]
    fn tv_random_pairs_symmetric_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..10);
            let mk = |rng: &mut ChaCha8Rng| {
                let v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                let s: f64 = v.iter().sum();
                Distribution::new(v.into_iter().map(|x| x / s).collect())
            };
            let (p, q) = (mk(&mut rng), mk(&mut rng));
            let d = tv_distance(&p, &q).unwrap();
            assert!((0.0..=1.0 + 1e-15).contains(&d));
            assert_eq!(d, tv_distance(&q, &p).unwrap());
        }
    }

    #[test]
    fn empty_circuit_passes_with_zero_distances() {
        let r = verify_circuit(&Circuit::new(2), 1, &SynthConfig::default()).unwrap();
        assert!(r.passed());
        for s in &r.stages {
            assert_eq!((s.l2_distance, s.tv_distance), (Some(0.0), Some(0.0)));
        }
    }

    #[test]
    fn single_rz_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let tau: f64 = rng.gen_range(-7.0..7.0);
            let c = Circuit::with_gates(1, vec![Gate::h(0), Gate::rz(0, tau)]);
            let r = verify_circuit(&c, 0, &SynthConfig::default()).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            assert!(r.stage(LoweringLevel::RealEncoded).l2_distance.unwrap() <= 1e-12);
        }
    }

    #[test]
    fn tampering_fails() {
        let c = Circuit::with_gates(1, vec![Gate::h(0), Gate::rz(0, 0.4)]);
        let r = verify_circuit_with(&c, 0, &SynthConfig::default(), |level, lowered| {
            if level == LoweringLevel::RealEncoded {
                let g = lowered.gates.last_mut().unwrap();
                g.param = Some(crate::angle::Angle::new(g.angle().radians() + 1e-3));
            }
        })
        .unwrap();
        assert!(!r.passed());
        assert!(r.to_text().contains("reason: l1: state mismatch"));
    }

    #[test]
    fn report_is_deterministic() {
        let c = Circuit::with_gates(2, vec![Gate::h(0), Gate::cx(0, 1), Gate::t(1)]);
        let cfg = SynthConfig::default();
        let a = verify_circuit(&c, 2, &cfg).unwrap().to_text();
        let b = verify_circuit(&c, 2, &cfg).unwrap().to_text();
        assert_eq!(a, b);
        assert!(a.starts_with("status: PASS\ndigest: "));
    }
}
