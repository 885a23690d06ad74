use super::state::{apply_matrix_in_place, check_targets};
use super::{Gate, QuantumState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A control qubit and the value it must hold for the gate to act.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, value: true }
    }
    pub fn off(qubit: usize) -> Self {
        Self { qubit, value: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction<T> {
    pub gate: Gate<T>,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
}

/// Ordered gate sequence on a fixed-width register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    ops: Vec<Instruction<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Instruction<T>] {
        &self.ops
    }

    pub fn push(&mut self, gate: Gate<T>, targets: &[usize]) -> Result<&mut Self> {
        self.push_controlled(gate, targets, &[])
    }

    pub fn push_controlled(&mut self, gate: Gate<T>, targets: &[usize], controls: &[Control]) -> Result<&mut Self> {
        check_targets(self.n_qubits, gate.arity(), targets, controls)?;
        self.ops.push(Instruction { gate, targets: targets.to_vec(), controls: controls.to_vec() });
        Ok(self)
    }

    /// Appends every instruction of `other`, which must not be wider.
    pub fn extend(&mut self, other: &Circuit<T>) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(self)
    }

    /// Same instructions on a wider register.
    pub fn widened(&self, n_qubits: usize) -> Result<Self> {
        if n_qubits < self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: n_qubits });
        }
        Ok(Self { n_qubits, ops: self.ops.clone() })
    }

    /// Every instruction additionally conditioned on `control`; the register
    /// is widened to include the control qubit if needed.
    pub fn controlled_by(&self, control: Control) -> Result<Self> {
        let width = self.n_qubits.max(control.qubit + 1);
        let mut out = Circuit::new(width);
        for op in &self.ops {
            let mut controls = op.controls.clone();
            controls.push(control);
            out.push_controlled(op.gate.clone(), &op.targets, &controls)?;
        }
        Ok(out)
    }

    /// Runs the circuit on `state`.
    pub fn apply(&self, state: &QuantumState<T>) -> Result<QuantumState<T>> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: state.n_qubits() });
        }
        let mut out = state.clone();
        for op in &self.ops {
            apply_matrix_in_place(out.amplitudes_mut(), op.gate.matrix(), &op.targets, &op.controls);
        }
        Ok(out)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn prepare(&self) -> Result<QuantumState<T>> {
        self.apply(&QuantumState::zero(self.n_qubits)?)
    }
}
