//! Dense statevector simulator.
//!
//! Qubit ordering is little-endian: qubit `q` is bit `q` of the amplitude
//! index, so `|q1 q0⟩ = |1 0⟩` is amplitude index 2. Multi-qubit gate
//! matrices are indexed big-endian over their target list: for targets
//! `[a, b]` the local index is `2·bit(a) + bit(b)`, which makes
//! `CNOT` on `[control, target]` the textbook matrix.

mod circuit;
mod encode;
mod gate;
mod hadamard;
mod sample;
mod state;

pub use circuit::{Circuit, Control, Instruction};
pub use encode::{amplitude_encode, amplitude_encode_complex, AmplitudeEncoding};
pub use gate::{Gate, GateKind};
pub use hadamard::{binomial_sigma, hadamard_test, hadamard_test_with_p0, Mode};
pub use sample::{sample, ShotCounts};
pub use state::QuantumState;

