//! Statevector engines.
//!
//! [`ComplexState`] is the reference engine for arbitrary circuits;
//! [`RealState`] holds only real amplitudes and accepts only real gates.
//! Both share the same strided kernels: a single-qubit gate touches the
//! amplitude pairs that differ in the operand bit, a controlled gate only
//! the pairs whose control bit is set.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::gate::{self, Action, Gate, Matrix};

/// Largest register either engine will allocate.
pub const MAX_QUBITS: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("register of {0} qubits exceeds the {MAX_QUBITS}-qubit limit")]
    TooManyQubits(usize),
    #[error("register must have at least one qubit")]
    EmptyRegister,
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisOutOfRange { index: usize, num_qubits: usize },
    #[error("operand {qubit} out of range for {num_qubits} qubits")]
    OperandOutOfRange { qubit: usize, num_qubits: usize },
    #[error("invalid gate `{0}`")]
    InvalidGate(String),
    #[error("non-real gate in real engine: `{0}`")]
    NonRealGate(String),
    #[error("circuit has {circuit} qubits but the state has {state}")]
    RegisterMismatch { circuit: usize, state: usize },
    #[error("gate {index}: {source}")]
    AtGate {
        index: usize,
        #[source]
        source: Box<SimError>,
    },
}

fn check_register(num_qubits: usize) -> Result<usize, SimError> {
    match num_qubits {
        0 => Err(SimError::EmptyRegister),
        n if n > MAX_QUBITS => Err(SimError::TooManyQubits(n)),
        n => Ok(1usize << n),
    }
}

fn check_gate(g: &Gate, num_qubits: usize) -> Result<(), SimError> {
    if !crate::circuit::gate_violations(g, num_qubits).is_empty() {
        if let Some(qubit) = g.operands.iter().find(|&q| q >= num_qubits) {
            return Err(SimError::OperandOutOfRange { qubit, num_qubits });
        }
        return Err(SimError::InvalidGate(g.to_string()));
    }
    Ok(())
}

trait Amplitude: Copy + Add<Output = Self> + Mul<Output = Self> + Send + Sync {}
impl<T: Copy + Add<Output = T> + Mul<Output = T> + Send + Sync> Amplitude for T {}

fn apply_single<T: Amplitude>(amps: &mut [T], qubit: usize, m: &[[T; 2]; 2]) {
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = m[0][0] * x + m[0][1] * y;
            *a1 = m[1][0] * x + m[1][1] * y;
        }
    }
}

fn apply_controlled<T: Amplitude>(amps: &mut [T], control: usize, target: usize, m: &[[T; 2]; 2]) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    let stride = tmask;
    for (b, block) in amps.chunks_exact_mut(stride << 1).enumerate() {
        let base = b * (stride << 1);
        let (lo, hi) = block.split_at_mut(stride);
        if control > target {
            // Control bit is constant across the block.
            if base & cmask == 0 {
                continue;
            }
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        } else {
            for (off, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if off & cmask == 0 {
                    continue;
                }
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        }
    }
}

fn apply_action<T: Amplitude>(amps: &mut [T], action: &Action<T>) {
    match action {
        Action::Phase(p) => amps.iter_mut().for_each(|a| *a = *p * *a),
        Action::Single { qubit, m } => apply_single(amps, *qubit, m),
        Action::Controlled { control, target, m } => apply_controlled(amps, *control, *target, m),
    }
}

fn mat_pow<T: Amplitude>(m: [[T; 2]; 2], k: usize) -> [[T; 2]; 2] {
    let mut acc = m;
    for _ in 1..k {
        acc = [
            [m[0][0] * acc[0][0] + m[0][1] * acc[1][0], m[0][0] * acc[0][1] + m[0][1] * acc[1][1]],
            [m[1][0] * acc[0][0] + m[1][1] * acc[1][0], m[1][0] * acc[0][1] + m[1][1] * acc[1][1]],
        ];
    }
    acc
}

/// Action of `k` back-to-back copies of the same gate, composed by
/// repeated 2×2 multiplication.
fn repeated<T: Amplitude>(action: Action<T>, k: usize) -> Action<T> {
    match action {
        Action::Phase(p) => Action::Phase((1..k).fold(p, |acc, _| acc * p)),
        Action::Single { qubit, m } => Action::Single { qubit, m: mat_pow(m, k) },
        Action::Controlled { control, target, m } => Action::Controlled { control, target, m: mat_pow(m, k) },
    }
}

fn run_generic<T: Amplitude>(
    c: &Circuit,
    amps: &mut [T],
    num_qubits: usize,
    to_action: impl Fn(&Gate) -> Result<Action<T>, SimError>,
) -> Result<(), SimError> {
    if c.num_qubits != num_qubits {
        return Err(SimError::RegisterMismatch { circuit: c.num_qubits, state: num_qubits });
    }
    let at = |index: usize| move |e: SimError| SimError::AtGate { index, source: Box::new(e) };
    let mut i = 0;
    while i < c.gates.len() {
        let g = &c.gates[i];
        check_gate(g, num_qubits).map_err(at(i))?;
        let action = to_action(g).map_err(at(i))?;
        // Runs of identical gates (G^k at the fixed-gate level) collapse into one pass.
        let run = c.gates[i..].iter().take_while(|h| *h == g).count();
        apply_action(amps, &repeated(action, run));
        i += run;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl ComplexState {
    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<ComplexState, SimError> {
        let len = check_register(num_qubits)?;
        if index >= len {
            return Err(SimError::BasisOutOfRange { index, num_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(ComplexState { num_qubits, amps })
    }

    /// Wrap raw amplitudes. The length must be a power of two; the caller is
    /// responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<ComplexState, SimError> {
        let num_qubits = register_size(amps.len())?;
        Ok(ComplexState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        check_gate(g, self.num_qubits)?;
        apply_action(&mut self.amps, &gate::action(g));
        Ok(())
    }

    pub fn run(mut self, c: &Circuit) -> Result<ComplexState, SimError> {
        run_generic(c, &mut self.amps, self.num_qubits, |g| Ok(gate::action(g)))?;
        Ok(self)
    }

    pub fn distribution(&self) -> Distribution {
        Distribution { probs: self.amps.iter().map(|a| a.norm_sqr()).collect() }
    }

    /// Euclidean distance to another state of the same size.
    pub fn distance(&self, other: &ComplexState) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len(), "state size mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealState {
    num_qubits: usize,
    amps: Vec<f64>,
}

impl RealState {
    pub fn basis(num_qubits: usize, index: usize) -> Result<RealState, SimError> {
        let len = check_register(num_qubits)?;
        if index >= len {
            return Err(SimError::BasisOutOfRange { index, num_qubits });
        }
        let mut amps = vec![0.0; len];
        amps[index] = 1.0;
        Ok(RealState { num_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<f64>) -> Result<RealState, SimError> {
        let num_qubits = register_size(amps.len())?;
        Ok(RealState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Apply a real gate; anything with a complex entry is rejected.
    pub fn apply(&mut self, g: &Gate) -> Result<(), SimError> {
        check_gate(g, self.num_qubits)?;
        let action = gate::real_action(g).ok_or_else(|| SimError::NonRealGate(g.to_string()))?;
        apply_action(&mut self.amps, &action);
        Ok(())
    }

    pub fn run(mut self, c: &Circuit) -> Result<RealState, SimError> {
        run_generic(c, &mut self.amps, self.num_qubits, |g| {
            gate::real_action(g).ok_or_else(|| SimError::NonRealGate(g.to_string()))
        })?;
        Ok(self)
    }

    pub fn distribution(&self) -> Distribution {
        Distribution { probs: self.amps.iter().map(|a| a * a).collect() }
    }

    pub fn distance(&self, other: &RealState) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len(), "state size mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Dense unitary of a circuit, built column by column from basis inputs.
pub fn unitary(c: &Circuit) -> Result<Matrix, SimError> {
    let dim = check_register(c.num_qubits)?;
    let mut m = Matrix::identity(dim);
    for col in 0..dim {
        let out = ComplexState::basis(c.num_qubits, col)?.run(c)?;
        for (row, a) in out.amplitudes().iter().enumerate() {
            m.set(row, col, *a);
        }
    }
    Ok(m)
}

fn register_size(len: usize) -> Result<usize, SimError> {
    if len < 2 || !len.is_power_of_two() {
        return Err(SimError::EmptyRegister);
    }
    let n = len.trailing_zeros() as usize;
    check_register(n)?;
    Ok(n)
}

/// Outcome probabilities in basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Distribution {
        Distribution { probs }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Draw `shots` outcomes by inverse-CDF sampling with a seeded ChaCha8
    /// generator. Returns one count per outcome.
    pub fn sample(&self, shots: u64, seed: u64) -> Vec<u64> {
        let mut counts = vec![0u64; self.probs.len()];
        if self.probs.is_empty() {
            return counts;
        }
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for p in &self.probs {
            acc += p.max(0.0);
            cdf.push(acc);
        }
        let total = acc;
        let last = cdf.iter().rposition(|_| true).unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..shots {
            let u = rng.gen::<f64>() * total;
            let k = cdf.partition_point(|&c| c <= u).min(last);
            counts[k] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn basis_states() {
        let s = ComplexState::basis(3, 5).unwrap();
        assert_eq!(s.amplitudes()[5], c(1.0, 0.0));
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
        assert_eq!(ComplexState::basis(2, 4), Err(SimError::BasisOutOfRange { index: 4, num_qubits: 2 }));
        assert!(matches!(ComplexState::basis(40, 0), Err(SimError::TooManyQubits(40))));
    }

    #[test]
    fn f_half_pi_on_control_set() {
        // control = qubit 1, target = qubit 0: |10⟩ is index 2, |11⟩ index 3.
        let g = Gate::f(1, 0, FRAC_PI_2);
        let mut s = ComplexState::basis(2, 2).unwrap();
        s.apply(&g).unwrap();
        assert_close(s.amplitudes(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-15);
        let mut s = ComplexState::basis(2, 3).unwrap();
        s.apply(&g).unwrap();
        assert_close(s.amplitudes(), &[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)], 1e-15);
    }

    #[test]
    fn rz_adds_phase_to_one() {
        let tau = 0.8;
        let h = FRAC_1_SQRT_2;
        let mut s = ComplexState::from_amplitudes(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        s.apply(&Gate::rz(0, tau)).unwrap();
        assert_close(s.amplitudes(), &[c(h, 0.0), Complex64::from_polar(h, tau)], 1e-15);
    }

    #[test]
    fn real_engine() {
        let phi = 2.0 * PI * (5f64.sqrt() - 1.0) / 2.0;
        let mut s = RealState::basis(2, 2).unwrap();
        s.apply(&Gate::f(1, 0, phi)).unwrap();
        assert_eq!(s.amplitudes(), &[0.0, 0.0, phi.cos(), phi.sin()]);

        let mut s = RealState::basis(1, 0).unwrap();
        s.apply(&Gate::h(0)).unwrap();
        assert_eq!(s.amplitudes(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);

        let err = s.apply(&Gate::rz(0, PI / 4.0)).unwrap_err();
        assert!(err.to_string().starts_with("non-real gate in real engine"));
    }

    #[test]
    fn run_attaches_gate_index() {
        let circ = Circuit::with_gates(1, vec![Gate::h(0), Gate::s(0)]);
        let err = RealState::basis(1, 0).unwrap().run(&circ).unwrap_err();
        assert!(matches!(err, SimError::AtGate { index: 1, .. }));
    }

    #[test]
    fn empty_circuit_and_involution() {
        let init = ComplexState::basis(2, 1).unwrap();
        assert_eq!(init.clone().run(&Circuit::new(2)).unwrap(), init);
        let hh = Circuit::with_gates(1, vec![Gate::h(0), Gate::h(0)]);
        let out = ComplexState::basis(1, 0).unwrap().run(&hh).unwrap();
        assert_close(out.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)], 1e-12);
    }

    #[test]
    fn runs_of_identical_gates_match_stepwise() {
        let g = Gate::f(2, 0, 0.37);
        let circ = Circuit::with_gates(3, vec![Gate::h(2), Gate::h(0), g, g, g, g, g, Gate::x(1), g]);
        let fused = RealState::basis(3, 0).unwrap().run(&circ).unwrap();
        let mut step = RealState::basis(3, 0).unwrap();
        for h in &circ.gates {
            step.apply(h).unwrap();
        }
        assert!(fused.distance(&step) < 1e-14);
    }

    #[test]
    fn distributions() {
        let h = FRAC_1_SQRT_2;
        let s = ComplexState::from_amplitudes(vec![c(h, 0.0), c(0.0, h)]).unwrap();
        let d = s.distribution();
        assert!((d.probabilities()[0] - 0.5).abs() < 1e-15 && (d.probabilities()[1] - 0.5).abs() < 1e-15);
        assert_eq!(ComplexState::basis(2, 3).unwrap().distribution().probabilities(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn sampling_point_mass_and_determinism() {
        let d = Distribution::new(vec![1.0]);
        assert_eq!(d.sample(17, 99), vec![17]);
        let d = Distribution::new(vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(d.sample(1000, 5), d.sample(1000, 5));
        assert_eq!(d.sample(1000, 5).iter().sum::<u64>(), 1000);
        assert_eq!(d.sample(0, 5), vec![0; 4]);
        let d = Distribution::new(vec![0.0, 1.0, 0.0]);
        assert_eq!(d.sample(50, 1), vec![0, 50, 0]);
    }

    #[test]
    fn sampling_uniform_within_binomial_bound() {
        let d = Distribution::new(vec![0.25; 4]);
        let shots = 1_000_000u64;
        let sd = (shots as f64 * 0.25 * 0.75).sqrt();
        for seed in [0, 1, 2] {
            for &n in &d.sample(shots, seed) {
                assert!((n as f64 - 250_000.0).abs() <= 4.0 * sd, "{n}");
            }
        }
    }
}
