//! Real linear-combination-of-unitaries decompositions.
//!
//! Terms are tensor strings over `{I, X, Z, W}` with `W = Ry(3π) =
//! [[0, 1], [−1, 0]] = iY`. These `4^n` real orthogonal strings are an
//! orthogonal basis of real `2^n × 2^n` matrices under the trace inner
//! product, so a real matrix always decomposes with real coefficients. A
//! string holding `m` copies of `W` is the Pauli string with `Y` in the same
//! places times `i^m`.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sim::{Circuit, Gate};

/// Coefficients below this magnitude are dropped by [`pauli_decompose`].
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

/// Single-qubit factor of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    I,
    X,
    Z,
    /// `Ry(3π) = iY`.
    W,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::I, Factor::X, Factor::Z, Factor::W];

    /// Whether the factor flips the computational-basis bit.
    fn flips(self) -> bool {
        matches!(self, Factor::X | Factor::W)
    }

    /// Matrix entry `F[row_bit][row_bit ^ flips]`.
    fn entry<T: Scalar>(self, row_bit: usize) -> T {
        match (self, row_bit) {
            (Factor::Z, 1) | (Factor::W, 1) => -T::one(),
            _ => T::one(),
        }
    }

    pub fn gate<T: Scalar>(self) -> Gate<T> {
        match self {
            Factor::I => Gate::i(),
            Factor::X => Gate::x(),
            Factor::Z => Gate::z(),
            Factor::W => Gate::ry(T::lit(3.0) * T::PI()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::I => "I",
            Factor::X => "X",
            Factor::Z => "Z",
            Factor::W => "Ry(3π)",
        })
    }
}

/// `coefficient · (factors[n−1] ⊗ … ⊗ factors[0])`; `factors[q]` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuTerm<T> {
    pub coefficient: T,
    pub factors: Vec<Factor>,
}

impl<T: Scalar> LcuTerm<T> {
    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    /// Tensor label, most significant qubit first (`X⊗I⊗Z`).
    pub fn label(&self) -> String {
        self.factors.iter().rev().map(ToString::to_string).collect::<Vec<_>>().join("⊗")
    }

    fn flip_mask(&self) -> usize {
        self.factors.iter().enumerate().filter(|(_, f)| f.flips()).map(|(q, _)| 1 << q).sum()
    }

    /// `(column, value)` of the single nonzero in `row` of the unit-norm string.
    fn row_entry(&self, row: usize) -> (usize, T) {
        let sign = self
            .factors
            .iter()
            .enumerate()
            .fold(T::one(), |acc, (q, f)| acc * f.entry::<T>((row >> q) & 1));
        (row ^ self.flip_mask(), sign)
    }

    /// Dense matrix of the unit-norm string (no coefficient).
    pub fn unitary_matrix(&self) -> Matrix<T> {
        let dim = 1usize << self.n_qubits();
        let mut m = Matrix::zeros(dim, dim);
        for r in 0..dim {
            let (c, v) = self.row_entry(r);
            m.set(r, c, v);
        }
        m
    }

    /// Gate sequence applying the string; identity factors are omitted.
    pub fn circuit(&self) -> Result<Circuit<T>> {
        let mut c = Circuit::new(self.n_qubits());
        for (q, f) in self.factors.iter().enumerate() {
            if *f != Factor::I {
                c.push(f.gate(), &[q])?;
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcuDecomposition<T> {
    pub n_qubits: usize,
    pub terms: Vec<LcuTerm<T>>,
}

impl<T: Scalar> LcuDecomposition<T> {
    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ|c_j|`, the LCU normalisation.
    pub fn l1_norm(&self) -> T {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Applies `Σ c_j U_j` to a real vector without forming the matrix.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: v.len() });
        }
        let mut out = vec![T::zero(); v.len()];
        for term in &self.terms {
            for (r, o) in out.iter_mut().enumerate() {
                let (c, s) = term.row_entry(r);
                *o = *o + term.coefficient * s * v[c];
            }
        }
        Ok(out)
    }
}

/// The per-interval block `[[1 − a, a], [0, 1 − b]]` as
/// `c0·I + c1·X + c2·Z + c3·Ry(3π)`.
pub fn decompose_block<T: Scalar>(a: T, b: T) -> LcuDecomposition<T> {
    let half = T::lit(0.5);
    let coefficients = [T::one() - a * half - b * half, a * half, (b - a) * half, a * half];
    LcuDecomposition {
        n_qubits: 1,
        terms: coefficients
            .into_iter()
            .zip(Factor::ALL)
            .map(|(coefficient, f)| LcuTerm { coefficient, factors: vec![f] })
            .collect(),
    }
}

/// Decomposes a real `2^n × 2^n` matrix over all `4^n` strings, keeping
/// coefficients with `|c| ≥` [`COEFFICIENT_CUTOFF`].
///
/// `c_Q = Tr(Qᵀ A) / 2^n`; each string has one nonzero per row, so every
/// coefficient costs `O(2^n)`.
pub fn pauli_decompose<T: Scalar>(matrix: &Matrix<T>) -> Result<LcuDecomposition<T>> {
    let n = square_power_of_two(matrix)?;
    let dim = 1usize << n;
    let scale = T::one() / T::lit(dim as f64);
    let cutoff = T::lit(COEFFICIENT_CUTOFF);
    let mut terms = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let factors: Vec<Factor> = (0..n).map(|q| Factor::ALL[(code >> (2 * q)) & 3]).collect();
        let mut term = LcuTerm { coefficient: T::zero(), factors };
        let mut acc = T::zero();
        for r in 0..dim {
            let (c, s) = term.row_entry(r);
            acc = acc + s * matrix.get(r, c);
        }
        let coefficient = acc * scale;
        if coefficient.abs() >= cutoff {
            term.coefficient = coefficient;
            terms.push(term);
        }
    }
    Ok(LcuDecomposition { n_qubits: n, terms })
}

/// Hermitian-Pauli coefficients `Tr(P A) / 2^n` over `{I, X, Y, Z}^n`,
/// computed with complex arithmetic. Strings are encoded as bytes
/// (`b'I'`, `b'X'`, `b'Y'`, `b'Z'`), index 0 acting on qubit 0. Used as an
/// independent cross-check of [`pauli_decompose`].
pub fn pauli_coefficients<T: Scalar>(matrix: &Matrix<T>) -> Result<Vec<(Vec<u8>, Complex<T>)>> {
    let n = square_power_of_two(matrix)?;
    let dim = 1usize << n;
    let (o, l) = (T::zero(), T::one());
    let pauli = |p: u8, r: usize, c: usize| -> Complex<T> {
        match (p, r, c) {
            (b'I', 0, 0) | (b'I', 1, 1) | (b'X', 0, 1) | (b'X', 1, 0) | (b'Z', 0, 0) => Complex::new(l, o),
            (b'Z', 1, 1) => Complex::new(-l, o),
            (b'Y', 0, 1) => Complex::new(o, -l),
            (b'Y', 1, 0) => Complex::new(o, l),
            _ => Complex::new(o, o),
        }
    };
    let mut out = Vec::with_capacity(1 << (2 * n));
    for code in 0..(1usize << (2 * n)) {
        let string: Vec<u8> = (0..n).map(|q| b"IXYZ"[(code >> (2 * q)) & 3]).collect();
        let mut trace = Complex::new(o, o);
        for r in 0..dim {
            for c in 0..dim {
                let a = matrix.get(c, r);
                if a == o {
                    continue;
                }
                let p = string
                    .iter()
                    .enumerate()
                    .fold(Complex::new(l, o), |acc, (q, &s)| acc * pauli(s, (r >> q) & 1, (c >> q) & 1));
                trace = trace + p * a;
            }
        }
        out.push((string, trace / T::lit(dim as f64)));
    }
    Ok(out)
}

/// Dense `Σ c_j U_j`.
pub fn reconstruct<T: Scalar>(decomp: &LcuDecomposition<T>) -> Result<Matrix<T>> {
    let dim = decomp.dimension();
    let mut m = Matrix::zeros(dim, dim);
    for term in &decomp.terms {
        if term.n_qubits() != decomp.n_qubits {
            return Err(Error::DimensionMismatch { expected: decomp.n_qubits, got: term.n_qubits() });
        }
        for r in 0..dim {
            let (c, s) = term.row_entry(r);
            m.set(r, c, m.get(r, c) + term.coefficient * s);
        }
    }
    Ok(m)
}

fn square_power_of_two<T: Scalar>(matrix: &Matrix<T>) -> Result<usize> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch { expected: matrix.rows(), got: matrix.cols() });
    }
    let dim = matrix.rows();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}
