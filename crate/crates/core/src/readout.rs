//! Reads the fitted curve back out of `|β′⟩` through row overlaps.
//!
//! `ŷ_k = ⟨row_k|β′⟩` up to one global factor. The overlap of `|β′⟩` with the
//! normalised row is the quantum part; `‖row_k‖` and `‖Sβ′‖` are classical
//! data and are applied afterwards.

use num_complex::Complex;

use crate::bspline::DesignMatrix;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::rng::stream_seed;
use crate::scalar::Scalar;
use crate::sim::{amplitude_encode, hadamard_test, Circuit, Mode, QuantumState};

/// Imaginary overlap parts above this are reported as an error.
pub const IMAG_TOL: f64 = 1e-8;
/// `‖Sβ′‖` below this cannot be rescaled.
pub const SCALE_TOL: f64 = 1e-12;

/// Row `k` of `S` prepared as a quantum state.
#[derive(Debug, Clone)]
pub struct RowEncoding<T> {
    pub k: usize,
    pub raw_row: Vec<T>,
    pub norm: T,
    pub state: QuantumState<T>,
    pub circuit: Circuit<T>,
}

impl<T: Scalar> RowEncoding<T> {
    pub fn new(s: &DesignMatrix<T>, k: usize) -> Result<Self> {
        if k >= s.dim() {
            return Err(Error::IndexOutOfRange { index: k, lo: 0, hi: s.dim() });
        }
        let raw_row = s.row(k).to_vec();
        let norm = norm(&raw_row);
        if norm == T::zero() {
            return Err(Error::ZeroVector);
        }
        let enc = amplitude_encode(&raw_row)?;
        Ok(Self { k, raw_row, norm, state: enc.state, circuit: enc.circuit })
    }
}

/// `Re⟨x′_k|β′⟩` for row `k` (0-based).
pub fn row_overlap<T: Scalar>(s: &DesignMatrix<T>, k: usize, beta_state: &QuantumState<T>, mode: Mode) -> Result<T> {
    let row = RowEncoding::new(s, k)?;
    match mode {
        Mode::Exact => exact_overlap(&row, beta_state),
        Mode::Shots { .. } => {
            let beta = encode_state(beta_state)?;
            overlap_with(&row, beta_state, &beta, mode)
        }
    }
}

fn check_dim<T: Scalar>(row: &RowEncoding<T>, beta_state: &QuantumState<T>) -> Result<()> {
    if row.raw_row.len() != beta_state.dim() {
        return Err(Error::DimensionMismatch { expected: row.raw_row.len(), got: beta_state.dim() });
    }
    Ok(())
}

fn exact_overlap<T: Scalar>(row: &RowEncoding<T>, beta_state: &QuantumState<T>) -> Result<T> {
    check_dim(row, beta_state)?;
    let z: Complex<T> = row
        .raw_row
        .iter()
        .zip(beta_state.amplitudes())
        .map(|(&r, a)| a * (r / row.norm))
        .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v);
    if z.im.abs() > T::lit(IMAG_TOL) {
        return Err(Error::ComplexOverlap(z.im.as_f64()));
    }
    Ok(z.re)
}

fn encode_state<T: Scalar>(state: &QuantumState<T>) -> Result<Circuit<T>> {
    if state.max_imag() > T::lit(IMAG_TOL) {
        return Err(Error::ComplexOverlap(state.max_imag().as_f64()));
    }
    Ok(amplitude_encode(&state.real_parts())?.circuit)
}

fn overlap_with<T: Scalar>(row: &RowEncoding<T>, beta_state: &QuantumState<T>, beta: &Circuit<T>, mode: Mode) -> Result<T> {
    check_dim(row, beta_state)?;
    match mode {
        Mode::Exact => exact_overlap(row, beta_state),
        Mode::Shots { shots, seed } => {
            // one shot stream per row
            let mode = Mode::Shots { shots, seed: stream_seed(seed, row.k as u64) };
            hadamard_test(&row.circuit, beta, beta_state.n_qubits(), mode)
        }
    }
}

/// Fitted values in normalised target units.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateVector<T> {
    pub values: Vec<T>,
    /// `1 / ‖Sβ′‖`.
    pub scale: T,
    /// `sign⟨y_norm, Sβ′⟩`.
    pub sign: T,
    /// `‖row_k‖ · Re⟨x′_k|β′⟩`; `values = sign · scale · raw_overlaps`.
    pub raw_overlaps: Vec<T>,
}

/// Recovers `ŷ ≈ y_norm` from `|β′⟩`.
///
/// Flipping the global sign of `beta_state` leaves `values` bitwise
/// unchanged: overlaps are always taken against the sign-corrected state, and
/// the recorded `raw_overlaps` are those values times `sign`.
pub fn recover_estimates<T: Scalar>(
    s: &DesignMatrix<T>,
    beta_state: &QuantumState<T>,
    y_norm: &[T],
    mode: Mode,
) -> Result<EstimateVector<T>> {
    let dim = s.dim();
    if beta_state.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: beta_state.dim() });
    }
    if y_norm.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: y_norm.len() });
    }
    if beta_state.max_imag() > T::lit(IMAG_TOL) {
        return Err(Error::ComplexOverlap(beta_state.max_imag().as_f64()));
    }
    let beta = beta_state.real_parts();
    let s_beta = s.entries.mul_vec(&beta)?;
    let magnitude = norm(&s_beta);
    if magnitude < T::lit(SCALE_TOL) {
        return Err(Error::Singular { pivot: magnitude.as_f64() });
    }
    let scale = T::one() / magnitude;
    let sign = if dot(y_norm, &s_beta) < T::zero() { -T::one() } else { T::one() };
    let canonical = if sign < T::zero() { beta_state.negated() } else { beta_state.clone() };
    let prep = match mode {
        Mode::Exact => None,
        Mode::Shots { .. } => Some(encode_state(&canonical)?),
    };
    let mut values = Vec::with_capacity(dim);
    let mut raw_overlaps = Vec::with_capacity(dim);
    for k in 0..dim {
        let row = RowEncoding::new(s, k)?;
        let overlap = match &prep {
            None => exact_overlap(&row, &canonical)?,
            Some(circuit) => overlap_with(&row, &canonical, circuit, mode)?,
        };
        let weighted = row.norm * overlap;
        values.push(scale * weighted);
        raw_overlaps.push(sign * weighted);
    }
    Ok(EstimateVector { values, scale, sign, raw_overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::design_matrix_d1;
    use crate::linalg::Matrix;
    use crate::oracle::solve_exact;

    fn k4() -> DesignMatrix<f64> {
        design_matrix_d1(&[0.0, 0.25, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn basis_row_against_matching_state() {
        let s = DesignMatrix { entries: Matrix::<f64>::identity(2), points: vec![], knots: None, form: crate::bspline::MatrixForm::General };
        let b = QuantumState::zero(1).unwrap();
        assert_eq!(row_overlap(&s, 0, &b, Mode::Exact).unwrap(), 1.0);
        assert_eq!(row_overlap(&s, 1, &b, Mode::Exact).unwrap(), 0.0);
    }

    #[test]
    fn overlaps_match_matrix_product() {
        let s = k4();
        let y = [0.1, 0.4, 0.7, 1.0];
        let beta = solve_exact(&s.entries, &y).unwrap().beta;
        let b = QuantumState::normalized_from_real(&beta).unwrap();
        let sb = s.entries.mul_vec(&beta).unwrap();
        for k in 0..4 {
            let expected = sb[k] / norm(s.row(k)) / norm(&beta);
            assert!((row_overlap(&s, k, &b, Mode::Exact).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_round_trip_and_sign_flip() {
        let s = k4();
        let y = [0.1, 0.4, 0.7, 1.0];
        let y_norm: Vec<f64> = y.iter().map(|v| v / norm(&y)).collect();
        let beta = solve_exact(&s.entries, &y).unwrap().beta;
        let b = QuantumState::normalized_from_real(&beta).unwrap();
        let est = recover_estimates(&s, &b, &y_norm, Mode::Exact).unwrap();
        for (a, e) in est.values.iter().zip(&y_norm) {
            assert!((a - e).abs() < 1e-8);
        }
        let flipped = recover_estimates(&s, &b.negated(), &y_norm, Mode::Exact).unwrap();
        assert_eq!(est.sign, -flipped.sign);
        for (a, c) in est.values.iter().zip(&flipped.values) {
            assert_eq!(a.to_bits(), c.to_bits());
        }
        for (k, v) in flipped.values.iter().enumerate() {
            assert_eq!(*v, flipped.sign * flipped.scale * flipped.raw_overlaps[k]);
        }
    }

    #[test]
    fn shots_mode_close_and_sign_invariant() {
        let s = k4();
        let y = [0.1, 0.4, 0.7, 1.0];
        let y_norm: Vec<f64> = y.iter().map(|v| v / norm(&y)).collect();
        let beta = solve_exact(&s.entries, &y).unwrap().beta;
        let b = QuantumState::normalized_from_real(&beta).unwrap();
        let mode = Mode::Shots { shots: 1_000_000, seed: 3 };
        let est = recover_estimates(&s, &b, &y_norm, mode).unwrap();
        for (a, e) in est.values.iter().zip(&y_norm) {
            assert!((a - e).abs() < 0.01, "{a} vs {e}");
        }
        let flipped = recover_estimates(&s, &b.negated(), &y_norm, mode).unwrap();
        assert_eq!(est.values, flipped.values);
    }

    #[test]
    fn errors() {
        let s = k4();
        let b = QuantumState::zero(2).unwrap();
        assert!(row_overlap(&s, 4, &b, Mode::Exact).is_err());
        assert!(row_overlap(&s, 0, &QuantumState::zero(1).unwrap(), Mode::Exact).is_err());
        let zero_row = DesignMatrix { entries: Matrix::<f64>::zeros(2, 2), points: vec![], knots: None, form: crate::bspline::MatrixForm::General };
        assert_eq!(row_overlap(&zero_row, 0, &QuantumState::zero(1).unwrap(), Mode::Exact).unwrap_err(), Error::ZeroVector);
        let degenerate = recover_estimates(&zero_row, &QuantumState::zero(1).unwrap(), &[1.0, 0.0], Mode::Exact);
        assert!(matches!(degenerate, Err(Error::Singular { .. })));
        let complex = QuantumState::from_amplitudes(vec![Complex::new(0.0, 1.0), Complex::new(0.0, 0.0)]).unwrap();
        let id = DesignMatrix { entries: Matrix::<f64>::identity(2), points: vec![], knots: None, form: crate::bspline::MatrixForm::General };
        assert!(matches!(row_overlap(&id, 0, &complex, Mode::Exact), Err(Error::ComplexOverlap(_))));
    }
}
