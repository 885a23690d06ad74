//! One-ancilla Hadamard test for `Re⟨0|U_L† U_R|0⟩`.

use rand_distr::{Binomial, Distribution};

use super::{Circuit, Control, Gate};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

/// How overlaps and costs are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Probabilities read directly off the statevector.
    #[default]
    Exact,
    /// Ancilla sampled `shots` times from a generator seeded with `seed`.
    Shots { shots: u64, seed: u64 },
}

/// Standard deviation of a shots-mode Hadamard-test estimate whose true
/// ancilla-zero probability is `p0`.
pub fn binomial_sigma(p0: f64, shots: u64) -> f64 {
    2.0 * (p0 * (1.0 - p0) / shots as f64).sqrt()
}

/// Estimates `Re⟨0|U_L† U_R|0⟩` where `U_L = prep_left`, `U_R = prep_right`.
///
/// The register is widened by one ancilla at index `n_qubits`; `prep_left`
/// runs controlled on the ancilla being `|0⟩` and `prep_right` on `|1⟩`,
/// between two Hadamards on the ancilla.
pub fn hadamard_test<T: Scalar>(
    prep_left: &Circuit<T>,
    prep_right: &Circuit<T>,
    n_qubits: usize,
    mode: Mode,
) -> Result<T> {
    hadamard_test_with_p0(prep_left, prep_right, n_qubits, mode).map(|(v, _)| v)
}

/// As [`hadamard_test`], also returning the exact ancilla-zero probability.
pub fn hadamard_test_with_p0<T: Scalar>(
    prep_left: &Circuit<T>,
    prep_right: &Circuit<T>,
    n_qubits: usize,
    mode: Mode,
) -> Result<(T, T)> {
    for prep in [prep_left, prep_right] {
        if prep.n_qubits() != n_qubits {
            return Err(Error::DimensionMismatch { expected: n_qubits, got: prep.n_qubits() });
        }
    }
    let ancilla = n_qubits;
    let mut circuit = Circuit::new(n_qubits + 1);
    circuit.push(Gate::h(), &[ancilla])?;
    circuit.extend(&prep_left.controlled_by(Control::off(ancilla))?)?;
    circuit.extend(&prep_right.controlled_by(Control::on(ancilla))?)?;
    circuit.push(Gate::h(), &[ancilla])?;
    let state = circuit.prepare()?;

    let half = 1usize << n_qubits;
    let p0: T = state.amplitudes()[..half].iter().map(|a| a.norm_sqr()).sum();
    let p0 = p0.max(T::zero()).min(T::one());
    let estimate = match mode {
        Mode::Exact => T::lit(2.0) * p0 - T::one(),
        Mode::Shots { shots, seed } => {
            if shots == 0 {
                return Err(Error::InvalidArgument("shots must be at least 1".into()));
            }
            let dist = Binomial::new(shots, p0.as_f64()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let zeros = dist.sample(&mut stream_rng(seed, 0));
            T::lit((2.0 * zeros as f64 - shots as f64) / shots as f64)
        }
    };
    Ok((estimate, p0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_preparations_give_one() {
        let id = Circuit::<f64>::new(2);
        assert!((hadamard_test(&id, &id, 2, Mode::Exact).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_preparations_give_zero() {
        let id = Circuit::<f64>::new(1);
        let mut x = Circuit::new(1);
        x.push(Gate::x(), &[0]).unwrap();
        assert!(hadamard_test(&id, &x, 1, Mode::Exact).unwrap().abs() < 1e-15);
    }

    #[test]
    fn minus_sign_is_visible() {
        let id = Circuit::<f64>::new(1);
        let mut z = Circuit::new(1);
        z.push(Gate::x(), &[0]).unwrap().push(Gate::z(), &[0]).unwrap().push(Gate::x(), &[0]).unwrap();
        assert!((hadamard_test(&id, &z, 1, Mode::Exact).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn width_mismatch() {
        let a = Circuit::<f64>::new(1);
        let b = Circuit::<f64>::new(2);
        assert!(hadamard_test(&a, &b, 1, Mode::Exact).is_err());
    }

    #[test]
    fn shots_are_reproducible() {
        let id = Circuit::<f64>::new(1);
        let mut h = Circuit::new(1);
        h.push(Gate::h(), &[0]).unwrap();
        let mode = Mode::Shots { shots: 1000, seed: 9 };
        let a = hadamard_test(&id, &h, 1, mode).unwrap();
        let b = hadamard_test(&id, &h, 1, mode).unwrap();
        assert_eq!(a, b);
        assert!((a - std::f64::consts::FRAC_1_SQRT_2).abs() < 5.0 * binomial_sigma(0.85, 1000));
    }
}
