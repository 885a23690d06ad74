//! Amplitude encoding by a cascade of uniformly controlled Y rotations.
//!
//! The most significant qubit is rotated first from the norms of the two
//! halves of the vector; each following qubit is rotated once per value of
//! the qubits above it. At the least significant qubit the rotation angle is
//! `2·atan2(a_odd, a_even)` on the signed entries, which reproduces negative
//! amplitudes without any phase gates.

use num_complex::Complex;

use super::state::log2_exact;
use super::{Circuit, Control, Gate, QuantumState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Prepared state together with the gate sequence that produced it from `|0…0⟩`.
#[derive(Debug, Clone)]
pub struct AmplitudeEncoding<T> {
    pub state: QuantumState<T>,
    pub circuit: Circuit<T>,
}

/// Encodes a real vector of length `2^n`, `n ≥ 1`.
pub fn amplitude_encode<T: Scalar>(vector: &[T]) -> Result<AmplitudeEncoding<T>> {
    let n = log2_exact(vector.len())?;
    if n == 0 {
        return Err(Error::InvalidArgument("amplitude encoding needs at least two entries".into()));
    }
    let norm = vector.iter().map(|&v| v * v).sum::<T>().sqrt();
    if norm <= T::zero() || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let unit: Vec<T> = vector.iter().map(|&v| v / norm).collect();

    let mut circuit = Circuit::new(n);
    for q in (0..n).rev() {
        let block = 1usize << (q + 1);
        let half = block / 2;
        for (prefix, chunk) in unit.chunks(block).enumerate() {
            let (r0, r1) = if q == 0 {
                (chunk[0], chunk[1])
            } else {
                (l2(&chunk[..half]), l2(&chunk[half..]))
            };
            // A zero-norm subtree contributes nothing; the rotation is skipped.
            if r0 == T::zero() && r1 == T::zero() {
                continue;
            }
            let theta = T::lit(2.0) * r1.atan2(r0);
            if theta == T::zero() {
                continue;
            }
            let controls: Vec<Control> = (q + 1..n)
                .map(|c| Control { qubit: c, value: (prefix >> (c - q - 1)) & 1 == 1 })
                .collect();
            circuit.push_controlled(Gate::ry(theta), &[q], &controls)?;
        }
    }
    let state = circuit.prepare()?;
    Ok(AmplitudeEncoding { state, circuit })
}

/// Complex front-end: accepted only when every imaginary part is zero.
pub fn amplitude_encode_complex<T: Scalar>(vector: &[Complex<T>]) -> Result<AmplitudeEncoding<T>> {
    if vector.iter().any(|a| a.im != T::zero()) {
        return Err(Error::ComplexInput);
    }
    let real: Vec<T> = vector.iter().map(|a| a.re).collect();
    amplitude_encode(&real)
}

fn l2<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(state: &QuantumState<f64>, expected: &[f64], tol: f64) {
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < tol && a.im.abs() < tol, "{a} vs {e}");
        }
    }

    #[test]
    fn uniform_two_qubit_state() {
        let enc = amplitude_encode(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_close(&enc.state, &[0.5; 4], 1e-15);
    }

    #[test]
    fn three_four_triangle() {
        let enc = amplitude_encode(&[3.0, 4.0]).unwrap();
        assert_close(&enc.state, &[0.6, 0.8], 1e-15);
    }

    #[test]
    fn signed_entries_and_zero_blocks() {
        let v = [0.0, 0.0, -1.0, 2.0, 0.0, 0.0, 0.0, -3.0];
        let enc = amplitude_encode(&v).unwrap();
        let norm = 14f64.sqrt();
        let expected: Vec<f64> = v.iter().map(|x| x / norm).collect();
        assert_close(&enc.state, &expected, 1e-14);
    }

    #[test]
    fn sigmoid_samples_on_four_qubits() {
        let ys: Vec<f64> = (0..16)
            .map(|k| {
                let z = -5.0 + 10.0 * k as f64 / 15.0;
                1.0 / (1.0 + (-z).exp())
            })
            .collect();
        let norm = ys.iter().map(|y| y * y).sum::<f64>().sqrt();
        let expected: Vec<f64> = ys.iter().map(|y| y / norm).collect();
        let enc = amplitude_encode(&ys).unwrap();
        assert_eq!(enc.state.n_qubits(), 4);
        assert_close(&enc.state, &expected, 1e-10);
    }

    #[test]
    fn errors() {
        assert_eq!(amplitude_encode(&[0.0, 0.0]).unwrap_err(), Error::ZeroVector);
        assert_eq!(amplitude_encode(&[1.0, 0.0, 0.0]).unwrap_err(), Error::NotPowerOfTwo(3));
        let c = [Complex::new(1.0, 0.5), Complex::new(0.0, 0.0)];
        assert_eq!(amplitude_encode_complex(&c).unwrap_err(), Error::ComplexInput);
    }
}
