//! Real-amplitude encoding of complex states.
//!
//! An `n`-qubit state `Σ_j ψ_j |j⟩` is encoded on `n + 1` qubits as
//! `Σ_j Re(ψ_j) |j⟩|R⟩ + Im(ψ_j) |j⟩|I⟩`, where the extra R-I ancilla sits
//! at index `n` with `|R⟩ = |0⟩` and `|I⟩ = |1⟩`. Lowered circuits add a
//! work ancilla at `n + 1` that starts, and stays, in `|1⟩`.

use num_complex::Complex64;
use thiserror::Error;

use crate::angle::Angle;
use crate::gate::Gate;
use crate::sim::{ComplexState, Distribution, RealState, SimError};

/// Probability mass tolerated on the `|0⟩` branch of the work ancilla.
pub const LEAK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EncodedLayout {
    pub num_data: usize,
    pub ri_ancilla: usize,
    pub work_ancilla: Option<usize>,
}

impl EncodedLayout {
    /// Data qubits plus the R-I ancilla.
    pub fn real(num_data: usize) -> EncodedLayout {
        EncodedLayout { num_data, ri_ancilla: num_data, work_ancilla: None }
    }

    /// Data qubits, R-I ancilla and work ancilla.
    pub fn with_work(num_data: usize) -> EncodedLayout {
        EncodedLayout { num_data, ri_ancilla: num_data, work_ancilla: Some(num_data + 1) }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data + 1 + usize::from(self.work_ancilla.is_some())
    }

    /// Offset added to every index by the work ancilla's `|1⟩`.
    fn work_offset(&self) -> usize {
        self.work_ancilla.map_or(0, |w| 1 << w)
    }

    /// Index of `|j⟩|R⟩` (plus work `|1⟩` when present).
    pub fn real_index(&self, j: usize) -> usize {
        j | self.work_offset()
    }

    /// Index of `|j⟩|I⟩` (plus work `|1⟩` when present).
    pub fn imag_index(&self, j: usize) -> usize {
        j | (1 << self.ri_ancilla) | self.work_offset()
    }

    /// Encoded basis index for a data basis index.
    pub fn encoded_basis(&self, j: usize) -> usize {
        self.real_index(j)
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EncodingError {
    #[error("state has {state} qubits, layout expects {layout}")]
    RegisterMismatch { state: usize, layout: usize },
    #[error("work-ancilla leaked: probability {0:e} on |0⟩")]
    WorkAncillaLeaked(f64),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Encode onto `layout` (work ancilla, if any, in `|1⟩`).
pub fn encode_with(s: &ComplexState, layout: &EncodedLayout) -> Result<RealState, EncodingError> {
    if s.num_qubits() != layout.num_data {
        return Err(EncodingError::RegisterMismatch { state: s.num_qubits(), layout: layout.num_data });
    }
    let mut amps = vec![0.0; 1usize << layout.num_qubits()];
    for (j, a) in s.amplitudes().iter().enumerate() {
        amps[layout.real_index(j)] = a.re;
        amps[layout.imag_index(j)] = a.im;
    }
    Ok(RealState::from_amplitudes(amps)?)
}

/// The encoded form of `s` on `n + 1` qubits.
pub fn encode(s: &ComplexState) -> RealState {
    encode_with(s, &EncodedLayout::real(s.num_qubits())).expect("layout built from the state")
}

/// Inverse of [`encode_with`]: `ψ_j = a_{j,R} + i·a_{j,I}`, read from the
/// work-ancilla `|1⟩` branch when the layout has one.
pub fn decode(s: &RealState, layout: &EncodedLayout) -> Result<ComplexState, EncodingError> {
    if s.num_qubits() != layout.num_qubits() {
        return Err(EncodingError::RegisterMismatch { state: s.num_qubits(), layout: layout.num_qubits() });
    }
    let a = s.amplitudes();
    let amps = (0..1usize << layout.num_data)
        .map(|j| Complex64::new(a[layout.real_index(j)], a[layout.imag_index(j)]))
        .collect();
    Ok(ComplexState::from_amplitudes(amps)?)
}

/// Outcome distribution over the data qubits, summing out the ancillas.
///
/// Fails when more than [`LEAK_TOLERANCE`] of the probability sits on the
/// work ancilla's `|0⟩` branch.
pub fn marginal_distribution(s: &RealState, layout: &EncodedLayout) -> Result<Distribution, EncodingError> {
    if s.num_qubits() != layout.num_qubits() {
        return Err(EncodingError::RegisterMismatch { state: s.num_qubits(), layout: layout.num_qubits() });
    }
    let data_mask = (1usize << layout.num_data) - 1;
    let mut probs = vec![0.0; 1usize << layout.num_data];
    let mut leaked = 0.0;
    for (i, a) in s.amplitudes().iter().enumerate() {
        let p = a * a;
        if let Some(w) = layout.work_ancilla {
            if i >> w & 1 == 0 {
                leaked += p;
            }
        }
        probs[i & data_mask] += p;
    }
    if leaked > LEAK_TOLERANCE {
        return Err(EncodingError::WorkAncillaLeaked(leaked));
    }
    Ok(Distribution::new(probs))
}

/// Encoded counterpart of a global phase `e^{iα}`: a rotation by `α` of the
/// R-I ancilla, which maps `encode(s)` to `encode(e^{iα} s)`.
pub fn global_phase_gate(alpha: Angle, layout: &EncodedLayout) -> Gate {
    Gate::ry(layout.ri_ancilla, alpha)
}
