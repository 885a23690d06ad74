use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gate identity. Angles are in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind<T> {
    I,
    X,
    Y,
    Z,
    H,
    /// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    Ry(T),
    Cz,
    Cnot,
    /// Single-qubit gate controlled on the first target being `|1⟩`.
    Controlled(Box<GateKind<T>>),
    /// User-supplied unitary, checked on construction.
    Custom(String),
}

/// A unitary with its dense matrix (row-major, `2^arity` square).
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T> {
    kind: GateKind<T>,
    arity: usize,
    matrix: Vec<Complex<T>>,
}

const UNITARY_TOL: f64 = 1e-12;

fn re<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn single_qubit_matrix<T: Scalar>(kind: &GateKind<T>) -> Option<Vec<Complex<T>>> {
    let (o, l) = (T::zero(), T::one());
    let m = match kind {
        GateKind::I => vec![re(l), re(o), re(o), re(l)],
        GateKind::X => vec![re(o), re(l), re(l), re(o)],
        GateKind::Y => vec![re(o), Complex::new(o, -l), Complex::new(o, l), re(o)],
        GateKind::Z => vec![re(l), re(o), re(o), re(-l)],
        GateKind::H => {
            let s = T::FRAC_1_SQRT_2();
            vec![re(s), re(s), re(s), re(-s)]
        }
        GateKind::Ry(theta) => {
            let half = *theta / T::lit(2.0);
            let (s, c) = (snap(half.sin()), snap(half.cos()));
            vec![re(c), re(-s), re(s), re(c)]
        }
        _ => return None,
    };
    Some(m)
}

/// Rounds trig values that are within an ulp-scale distance of 0 or ±1, so
/// that e.g. `Ry(3π)` is exactly `[[0, 1], [−1, 0]]`.
fn snap<T: Scalar>(v: T) -> T {
    let eps = T::epsilon() * T::lit(8.0);
    if v.abs() < eps {
        T::zero()
    } else if (v.abs() - T::one()).abs() < eps {
        v.signum()
    } else {
        v
    }
}

fn controlled_matrix<T: Scalar>(u: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut m = vec![re(T::zero()); 16];
    m[0] = re(T::one());
    m[5] = re(T::one());
    m[10] = u[0];
    m[11] = u[1];
    m[14] = u[2];
    m[15] = u[3];
    m
}

impl<T: Scalar> Gate<T> {
    /// Builds a named gate. Panics only for `Controlled` wrapping a gate that
    /// is not single-qubit, or for `Custom` (use [`Gate::from_matrix`]).
    pub fn new(kind: GateKind<T>) -> Self {
        let (arity, matrix) = match &kind {
            GateKind::Cz => {
                let mut m = single_qubit_matrix(&GateKind::I).unwrap();
                m = controlled_matrix(&m);
                m[15] = re(-T::one());
                (2, m)
            }
            GateKind::Cnot => (2, controlled_matrix(&single_qubit_matrix(&GateKind::X).unwrap())),
            GateKind::Controlled(inner) => {
                let u = single_qubit_matrix(inner).expect("controlled gate must wrap a single-qubit gate");
                (2, controlled_matrix(&u))
            }
            GateKind::Custom(_) => panic!("custom gates are built with Gate::from_matrix"),
            k => (1, single_qubit_matrix(k).unwrap()),
        };
        let gate = Self { kind, arity, matrix };
        debug_assert!(gate.unitary_deviation() <= T::tol(UNITARY_TOL));
        gate
    }

    /// Wraps an explicit matrix after checking `U†U = I`.
    pub fn from_matrix(name: impl Into<String>, matrix: Vec<Complex<T>>) -> Result<Self> {
        let dim = (matrix.len() as f64).sqrt() as usize;
        if dim * dim != matrix.len() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidArgument(format!("{} entries do not form a 2^k square matrix", matrix.len())));
        }
        let gate = Self { kind: GateKind::Custom(name.into()), arity: dim.trailing_zeros() as usize, matrix };
        let deviation = gate.unitary_deviation();
        if deviation > T::tol(UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation: deviation.as_f64() });
        }
        Ok(gate)
    }

    pub fn i() -> Self {
        Self::new(GateKind::I)
    }
    pub fn x() -> Self {
        Self::new(GateKind::X)
    }
    pub fn y() -> Self {
        Self::new(GateKind::Y)
    }
    pub fn z() -> Self {
        Self::new(GateKind::Z)
    }
    pub fn h() -> Self {
        Self::new(GateKind::H)
    }
    pub fn ry(theta: T) -> Self {
        Self::new(GateKind::Ry(theta))
    }
    pub fn cz() -> Self {
        Self::new(GateKind::Cz)
    }
    pub fn cnot() -> Self {
        Self::new(GateKind::Cnot)
    }

    /// Controlled version of a single-qubit gate; targets become `[control, target]`.
    pub fn controlled(&self) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: self.arity });
        }
        Ok(Self {
            kind: GateKind::Controlled(Box::new(self.kind.clone())),
            arity: 2,
            matrix: controlled_matrix(&self.matrix),
        })
    }

    pub fn kind(&self) -> &GateKind<T> {
        &self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &[Complex<T>] {
        &self.matrix
    }

    /// Max-abs entry of `U†U − I`.
    pub fn unitary_deviation(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let mut acc = re(T::zero());
                for k in 0..d {
                    acc = acc + self.matrix[k * d + i].conj() * self.matrix[k * d + j];
                }
                if i == j {
                    acc = acc - re(T::one());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

impl<T: Scalar> fmt::Display for GateKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::I => write!(f, "I"),
            GateKind::X => write!(f, "X"),
            GateKind::Y => write!(f, "Y"),
            GateKind::Z => write!(f, "Z"),
            GateKind::H => write!(f, "H"),
            GateKind::Ry(t) => write!(f, "Ry({t})"),
            GateKind::Cz => write!(f, "CZ"),
            GateKind::Cnot => write!(f, "CNOT"),
            GateKind::Controlled(inner) => write!(f, "C-{inner}"),
            GateKind::Custom(name) => write!(f, "{name}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ry_three_pi_is_exact() {
        let g = Gate::<f64>::ry(3.0 * PI);
        let expected = [0.0, 1.0, -1.0, 0.0];
        for (m, e) in g.matrix().iter().zip(expected) {
            assert_eq!(*m, re(e));
        }
    }

    #[test]
    fn named_gates_are_unitary() {
        let gates = [
            Gate::<f64>::i(),
            Gate::x(),
            Gate::y(),
            Gate::z(),
            Gate::h(),
            Gate::ry(0.7),
            Gate::cz(),
            Gate::cnot(),
            Gate::ry(1.1).controlled().unwrap(),
        ];
        for g in gates {
            assert!(g.unitary_deviation() < 1e-12, "{}", g.kind());
        }
    }

    #[test]
    fn from_matrix_rejects_non_unitary() {
        let m = vec![re(1.0), re(1.0), re(0.0), re(1.0)];
        assert!(matches!(Gate::<f64>::from_matrix("shear", m), Err(Error::NotUnitary { .. })));
        let m = vec![re(0.0), re(1.0), re(-1.0), re(0.0)];
        assert_eq!(Gate::<f64>::from_matrix("w", m).unwrap().arity(), 1);
    }

    #[test]
    fn controlled_rejects_two_qubit_gates() {
        assert!(Gate::<f64>::cz().controlled().is_err());
    }
}
