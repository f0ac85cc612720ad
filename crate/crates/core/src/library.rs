//! Reference circuits: QFT, two-qubit Grover and seeded random circuits.
//! Everything is written in the front-end gate set.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::angle::Angle;
use crate::circuit::Circuit;
use crate::gate::{Gate, GateKind, Operands};

/// Controlled phase `diag(1, 1, 1, e^{iλ})` from `Rz = diag(1, e^{iτ})` and two `CX`.
pub fn controlled_phase(control: usize, target: usize, lambda: f64) -> [Gate; 5] {
    [
        Gate::rz(control, lambda / 2.0),
        Gate::cx(control, target),
        Gate::rz(target, -lambda / 2.0),
        Gate::cx(control, target),
        Gate::rz(target, lambda / 2.0),
    ]
}

pub fn swap(a: usize, b: usize) -> [Gate; 3] {
    [Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]
}

/// Quantum Fourier transform on `n` qubits, mapping
/// `|x⟩ ↦ 2^{-n/2} Σ_y e^{2πi·xy/2^n} |y⟩` (bit reversal included).
pub fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for j in (0..n).rev() {
        c.push(Gate::h(j));
        for k in (0..j).rev() {
            let lambda = PI / f64::from(1u32 << (j - k));
            c.gates.extend(controlled_phase(k, j, lambda));
        }
    }
    for i in 0..n / 2 {
        c.gates.extend(swap(i, n - 1 - i));
    }
    c.name = Some(format!("qft-{n}"));
    c
}

/// One Grover iteration on two qubits, which lands exactly on `marked`.
pub fn grover2(marked: usize) -> Circuit {
    assert!(marked < 4, "two-qubit register");
    let flip_zeros = |c: &mut Circuit, pattern: usize| {
        for q in 0..2 {
            if pattern >> q & 1 == 0 {
                c.push(Gate::x(q));
            }
        }
    };
    let mut c = Circuit::new(2);
    c.push(Gate::h(0)).push(Gate::h(1));
    // Oracle: phase flip on |marked⟩.
    flip_zeros(&mut c, marked);
    c.push(Gate::cz(0, 1));
    flip_zeros(&mut c, marked);
    // Diffusion about the uniform state.
    c.push(Gate::h(0)).push(Gate::h(1));
    c.push(Gate::x(0)).push(Gate::x(1));
    c.push(Gate::cz(0, 1));
    c.push(Gate::x(0)).push(Gate::x(1));
    c.push(Gate::h(0)).push(Gate::h(1));
    c.name = Some(format!("grover-2 marked {marked}"));
    c
}

/// Random circuit over the whole front-end gate set, angles in `[-2π, 2π)`.
pub fn random_circuit(rng: &mut impl Rng, num_qubits: usize, len: usize) -> Circuit {
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| num_qubits >= 2 || k.num_operands() < 2)
        .collect();
    let mut c = Circuit::new(num_qubits);
    for _ in 0..len {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let operands = match kind.num_operands() {
            0 => Operands::None,
            1 => Operands::One(rng.gen_range(0..num_qubits)),
            _ => {
                let control = rng.gen_range(0..num_qubits);
                let mut target = rng.gen_range(0..num_qubits - 1);
                if target >= control {
                    target += 1;
                }
                Operands::Two { control, target }
            }
        };
        let param = kind.takes_angle().then(|| Angle::new(rng.gen_range(-TAU..TAU)));
        c.push(Gate { kind, operands, param });
    }
    c
}
