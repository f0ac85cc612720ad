use std::fmt;

use crate::gate::{Gate, GateKind, Operands};

/// An ordered list of gates over `num_qubits` qubits. Gates apply left to
/// right; qubit 0 is the least significant bit of a basis index.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    EmptyRegister,
    Arity { expected: usize, found: usize },
    MissingAngle,
    UnexpectedAngle,
    OperandOutOfRange { qubit: usize },
    DuplicateOperands,
    NonFiniteAngle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Position of the offending gate, `None` for register-level problems.
    pub gate: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::EmptyRegister => f.write_str("circuit has no qubits")?,
            ViolationKind::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {expected} operands, found {found}")?
            }
            ViolationKind::MissingAngle => f.write_str("missing angle")?,
            ViolationKind::UnexpectedAngle => f.write_str("unexpected angle")?,
            ViolationKind::OperandOutOfRange { qubit } => write!(f, "operand out of range ({qubit})")?,
            ViolationKind::DuplicateOperands => f.write_str("duplicate operands")?,
            ViolationKind::NonFiniteAngle => f.write_str("non-finite angle")?,
        }
        if let Some(i) = self.gate {
            write!(f, " at gate {i}")?;
        }
        Ok(())
    }
}

/// Problems with a single gate on a register of `num_qubits`.
pub fn gate_violations(g: &Gate, num_qubits: usize) -> Vec<ViolationKind> {
    let mut out = Vec::new();
    let expected = g.kind.num_operands();
    if g.operands.len() != expected {
        out.push(ViolationKind::Arity { expected, found: g.operands.len() });
    }
    match (g.kind.takes_angle(), g.param) {
        (true, None) => out.push(ViolationKind::MissingAngle),
        (false, Some(_)) => out.push(ViolationKind::UnexpectedAngle),
        (_, Some(a)) if !a.is_finite() => out.push(ViolationKind::NonFiniteAngle),
        _ => {}
    }
    for q in g.operands.iter() {
        if q >= num_qubits {
            out.push(ViolationKind::OperandOutOfRange { qubit: q });
        }
    }
    if let Operands::Two { control, target } = g.operands {
        if control == target {
            out.push(ViolationKind::DuplicateOperands);
        }
    }
    out
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit { num_qubits, gates: Vec::new(), name: None }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Circuit {
        Circuit { num_qubits, gates, name: None }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Every violation in the circuit, in gate order. Empty means valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.num_qubits == 0 {
            out.push(Violation { gate: None, kind: ViolationKind::EmptyRegister });
        }
        for (i, g) in self.gates.iter().enumerate() {
            out.extend(
                gate_violations(g, self.num_qubits)
                    .into_iter()
                    .map(|kind| Violation { gate: Some(i), kind }),
            );
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// `(single-qubit, two-qubit, phase)` gate counts.
    pub fn arity_counts(&self) -> (usize, usize, usize) {
        self.gates.iter().fold((0, 0, 0), |(s, t, p), g| match g.kind.num_operands() {
            0 => (s, t, p + 1),
            1 => (s + 1, t, p),
            _ => (s, t + 1, p),
        })
    }

    pub fn is_real(&self) -> bool {
        self.gates.iter().all(Gate::is_real)
    }
}
