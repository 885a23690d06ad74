use num_complex::Complex;

use super::{Control, Gate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Unit-norm complex amplitude vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

/// Tolerance on `|‖ψ‖² − 1|` accepted at construction.
const NORM_TOL: f64 = 1e-10;

impl<T: Scalar> QuantumState<T> {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, lo: 0, hi: dim - 1 });
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps amplitudes that are already normalised.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let n_qubits = log2_exact(amplitudes.len())?;
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a register needs at least one qubit".into()));
        }
        let norm_sqr: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - T::one()).abs() > T::tol(NORM_TOL) {
            return Err(Error::NotNormalized(norm_sqr.as_f64()));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps a normalised real vector.
    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    /// Normalises `values` and wraps the result.
    pub fn normalized_from_real(values: &[T]) -> Result<Self> {
        let norm = values.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let scaled: Vec<T> = values.iter().map(|&v| v / norm).collect();
        Self::from_real(&scaled)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Real parts of the amplitudes.
    pub fn real_parts(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.re).collect()
    }

    /// Largest `|Im a_i|`; zero for real states.
    pub fn max_imag(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |m, a| m.max(a.im.abs()))
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// The same state multiplied by the global phase −1.
    pub fn negated(&self) -> Self {
        Self { n_qubits: self.n_qubits, amplitudes: self.amplitudes.iter().map(|a| -a).collect() }
    }

    /// `U|ψ⟩` with `gate` embedded on `targets`.
    pub fn apply_gate(&self, gate: &Gate<T>, targets: &[usize]) -> Result<Self> {
        check_targets(self.n_qubits, gate.arity(), targets, &[])?;
        let mut out = self.clone();
        apply_matrix_in_place(&mut out.amplitudes, gate.matrix(), targets, &[]);
        Ok(out)
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }
}

pub(crate) fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

pub(crate) fn check_targets(
    n_qubits: usize,
    arity: usize,
    targets: &[usize],
    controls: &[Control],
) -> Result<()> {
    if targets.len() != arity {
        return Err(Error::ArityMismatch { expected: arity, got: targets.len() });
    }
    let all = targets.iter().copied().chain(controls.iter().map(|c| c.qubit));
    let mut seen = 0u64;
    for q in all {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateTargets);
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Applies a `2^k × 2^k` row-major matrix on `targets`, restricted to basis
/// states where every control qubit holds its control value. Arguments are
/// assumed validated.
pub(crate) fn apply_matrix_in_place<T: Scalar>(
    amps: &mut [Complex<T>],
    matrix: &[Complex<T>],
    targets: &[usize],
    controls: &[Control],
) {
    let k = targets.len();
    let local_dim = 1usize << k;
    let target_mask: usize = targets.iter().map(|&t| 1usize << t).sum();
    let (ctrl_mask, ctrl_value) = controls.iter().fold((0usize, 0usize), |(m, v), c| {
        (m | 1 << c.qubit, if c.value { v | 1 << c.qubit } else { v })
    });
    // offsets[j] = global bit pattern of local index j
    let offsets: Vec<usize> = (0..local_dim)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(pos, _)| j >> (k - 1 - pos) & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect();
    let mut buf = vec![Complex::new(T::zero(), T::zero()); local_dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 || base & ctrl_mask != ctrl_value {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            buf[j] = amps[base | off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (col, b) in buf.iter().enumerate() {
                acc = acc + matrix[row * local_dim + col] * b;
            }
            amps[base | off] = acc;
        }
    }
}
