//! Real-amplitude circuit transpiler.
//!
//! Any circuit over the usual gate set is lowered, with exact statevector
//! equivalence, to a circuit whose gates and amplitudes are all real, then
//! to controlled rotations `F(θ)` alone, and finally to repetitions of one
//! fixed two-qubit gate `G = F(φ)`. Every stage can be checked against a
//! complex reference simulation with [`verify::verify_circuit`].

pub mod angle;
pub mod circuit;
pub mod encoding;
pub mod fmt;
pub mod gate;
pub mod library;
pub mod sim;
pub mod synth;
pub mod text;
pub mod transpile;
pub mod verify;

pub use angle::Angle;
pub use circuit::{Circuit, Violation};
pub use encoding::EncodedLayout;
pub use gate::{Gate, GateKind, Operands};
pub use sim::{ComplexState, Distribution, RealState};
pub use synth::{SynthConfig, SynthesisResult};
pub use transpile::{LoweringLevel, TranspileReport};
pub use verify::VerificationReport;
