//! Knot vectors, Cox–de Boor basis functions and spline design matrices.
//!
//! Indices are zero-based: for knots `ξ_0..ξ_{T−1}` and degree `d` there are
//! `T − d − 1` basis functions `B_{0,d}..B_{T−d−2,d}`, and `B_{i,d}` is
//! supported on `[ξ_i, ξ_{i+d+1})`. The last non-empty knot interval is
//! closed on the right so that the basis also covers `x = ξ_{T−1}`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Non-decreasing knot sequence paired with a spline degree.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector<T> {
    knots: Vec<T>,
    degree: usize,
}

impl<T: Scalar> KnotVector<T> {
    pub fn new(knots: Vec<T>, degree: usize) -> Result<Self> {
        if knots.len() < degree + 2 {
            return Err(Error::TooFewKnots { len: knots.len(), degree });
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::UnsortedKnots);
        }
        Ok(Self { knots, degree })
    }

    /// `n_basis + degree + 1` equally spaced knots on `[0, 1]`.
    pub fn uniform(n_basis: usize, degree: usize) -> Result<Self> {
        let len = n_basis + degree + 1;
        if n_basis == 0 {
            return Err(Error::TooFewKnots { len, degree });
        }
        let step = T::one() / T::lit((len - 1) as f64);
        Self::new((0..len).map(|j| T::lit(j as f64) * step).collect(), degree)
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Number of basis functions `T − d − 1`.
    pub fn n_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Interval `[ξ_d, ξ_{T−d−1}]` on which the basis sums to one.
    pub fn interior(&self) -> (T, T) {
        (self.knots[self.degree], self.knots[self.knots.len() - self.degree - 1])
    }

    /// `B_{i,d}(x)` for this knot vector's degree.
    pub fn basis(&self, i: usize, x: T) -> Result<T> {
        basis_value(self, i, self.degree, x)
    }

    /// Index of the last interval with positive length; it is treated as
    /// closed at its right end.
    fn last_span(&self) -> Option<usize> {
        (0..self.knots.len() - 1).rev().find(|&j| self.knots[j] < self.knots[j + 1])
    }

    fn indicator(&self, j: usize, x: T, last_span: Option<usize>) -> T {
        let (lo, hi) = (self.knots[j], self.knots[j + 1]);
        let inside = (lo <= x && x < hi) || (Some(j) == last_span && x == hi);
        if inside {
            T::one()
        } else {
            T::zero()
        }
    }
}

/// `B_{i,d}(x)` by the Cox–de Boor recursion, with `0/0` taken as `0`.
///
/// `d` may differ from `knots.degree()`; `i` must satisfy `i + d + 1 < T`.
pub fn basis_value<T: Scalar>(knots: &KnotVector<T>, i: usize, d: usize, x: T) -> Result<T> {
    let t = knots.len();
    if i + d + 1 >= t {
        return Err(Error::IndexOutOfRange { index: i, lo: 0, hi: t.saturating_sub(d + 2) });
    }
    let xi = knots.knots();
    let last = knots.last_span();
    // level p holds B_{i+j,p} for j = 0..=d-p
    let mut level: Vec<T> = (0..=d).map(|j| knots.indicator(i + j, x, last)).collect();
    for p in 1..=d {
        for j in 0..=d - p {
            let k = i + j;
            let left = ratio(x - xi[k], xi[k + p] - xi[k]) * level[j];
            let right = ratio(xi[k + p + 1] - x, xi[k + p + 1] - xi[k + 1]) * level[j + 1];
            level[j] = left + right;
        }
    }
    Ok(level[0])
}

fn ratio<T: Scalar>(num: T, den: T) -> T {
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// How a [`DesignMatrix`] was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixForm {
    /// `S[k][i] = B_{i,d}(x_k)`.
    General,
    /// Upper-bidiagonal degree-1 system with unit boundary rows.
    D1Explicit,
    /// `[[0, S], [Sᵀ, 0]]` of another design matrix.
    Dilated,
    /// Block-diagonal per-interval layout with 2×2 blocks.
    BlockDiagonal,
}

/// Square spline system matrix with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    pub entries: Matrix<T>,
    pub points: Vec<T>,
    pub knots: Option<KnotVector<T>>,
    pub form: MatrixForm,
}

impl<T: Scalar> DesignMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn row(&self, k: usize) -> &[T] {
        self.entries.row(k)
    }
}

/// General design matrix `S[k][i] = B_{i,d}(x_k)`; must come out square.
pub fn design_matrix_general<T: Scalar>(knots: &KnotVector<T>, points: &[T]) -> Result<DesignMatrix<T>> {
    let n_basis = knots.n_basis();
    if points.len() != n_basis {
        return Err(Error::DimensionMismatch { expected: n_basis, got: points.len() });
    }
    let (lo, hi) = (knots.knots()[0], knots.knots()[knots.len() - 1]);
    if points.iter().any(|&x| !(lo..=hi).contains(&x)) {
        return Err(Error::InvalidArgument("evaluation point outside the knot range".into()));
    }
    let mut entries = Matrix::zeros(n_basis, n_basis);
    for (k, &x) in points.iter().enumerate() {
        for i in 0..n_basis {
            entries.set(k, i, knots.basis(i, x)?);
        }
    }
    Ok(DesignMatrix { entries, points: points.to_vec(), knots: Some(knots.clone()), form: MatrixForm::General })
}

/// The explicit degree-1 system: row 0 is `e_0`, row `K−1` is `e_{K−1}`, and
/// interior row `k` carries `1 − x_k` on the diagonal and `x_k` right of it.
pub fn design_matrix_d1<T: Scalar>(points: &[T]) -> Result<DesignMatrix<T>> {
    let k_dim = points.len();
    if k_dim < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points, got {k_dim}")));
    }
    if points.iter().any(|&x| !(T::zero()..=T::one()).contains(&x)) {
        return Err(Error::InvalidArgument("points must lie in [0, 1]".into()));
    }
    let mut entries = Matrix::zeros(k_dim, k_dim);
    entries.set(0, 0, T::one());
    entries.set(k_dim - 1, k_dim - 1, T::one());
    for (k, &x) in points.iter().enumerate().take(k_dim - 1).skip(1) {
        entries.set(k, k, T::one() - x);
        entries.set(k, k + 1, x);
    }
    Ok(DesignMatrix {
        entries,
        points: points.to_vec(),
        knots: Some(KnotVector::uniform(k_dim, 1)?),
        form: MatrixForm::D1Explicit,
    })
}

/// Evaluation points on `knots` (degree 1) at which the general design
/// matrix coincides with [`design_matrix_d1`]`(xs)`: row `k` is placed a
/// fraction `x_k` into the span `[ξ_{k+1}, ξ_{k+2})`, and the boundary rows
/// sit on the hat peaks of the first and last basis functions.
pub fn matched_points_d1<T: Scalar>(knots: &KnotVector<T>, xs: &[T]) -> Result<Vec<T>> {
    if knots.degree() != 1 || knots.n_basis() != xs.len() {
        return Err(Error::DimensionMismatch { expected: knots.n_basis(), got: xs.len() });
    }
    let xi = knots.knots();
    let k_dim = xs.len();
    Ok((0..k_dim)
        .map(|k| {
            if k == 0 || k == k_dim - 1 {
                xi[k + 1]
            } else {
                xi[k + 1] + xs[k] * (xi[k + 2] - xi[k + 1])
            }
        })
        .collect())
}

/// Hermitian dilation `[[0, S], [Sᵀ, 0]]` (dimension `2K`).
pub fn hermitian_dilation<T: Scalar>(s: &DesignMatrix<T>) -> Result<DesignMatrix<T>> {
    let k_dim = s.dim();
    if !s.entries.is_square() {
        return Err(Error::DimensionMismatch { expected: s.entries.rows(), got: s.entries.cols() });
    }
    let mut h = Matrix::zeros(2 * k_dim, 2 * k_dim);
    for r in 0..k_dim {
        for c in 0..k_dim {
            let v = s.entries.get(r, c);
            h.set(r, k_dim + c, v);
            h.set(k_dim + c, r, v);
        }
    }
    Ok(DesignMatrix { entries: h, points: s.points.clone(), knots: s.knots.clone(), form: MatrixForm::Dilated })
}

/// Right-hand side `(Y, 0)` of the dilated system.
pub fn dilate_rhs<T: Scalar>(y: &[T]) -> Vec<T> {
    y.iter().copied().chain(std::iter::repeat_n(T::zero(), y.len())).collect()
}

/// Block-diagonal per-interval system with blocks `[[1 − a, a], [0, 1 − b]]`.
pub fn block_diagonal<T: Scalar>(blocks: &[(T, T)]) -> Result<DesignMatrix<T>> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("no blocks".into()));
    }
    let n = 2 * blocks.len();
    let mut entries = Matrix::zeros(n, n);
    for (j, &(a, b)) in blocks.iter().enumerate() {
        let o = 2 * j;
        entries.set(o, o, T::one() - a);
        entries.set(o, o + 1, a);
        entries.set(o + 1, o + 1, T::one() - b);
    }
    Ok(DesignMatrix { entries, points: Vec::new(), knots: None, form: MatrixForm::BlockDiagonal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integer_knots(len: usize, degree: usize) -> KnotVector<f64> {
        KnotVector::new((0..len).map(|j| j as f64).collect(), degree).unwrap()
    }

    #[test]
    fn degree_zero_is_an_indicator() {
        let kv = integer_knots(5, 0);
        assert_eq!(kv.basis(1, 1.5).unwrap(), 1.0);
        assert_eq!(kv.basis(1, 1.0).unwrap(), 1.0);
        assert_eq!(kv.basis(1, 2.0).unwrap(), 0.0);
        assert_eq!(kv.basis(1, 0.5).unwrap(), 0.0);
        // right end closed on the last span
        assert_eq!(kv.basis(3, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn hat_peaks_at_middle_knot() {
        let kv = integer_knots(6, 1);
        for i in 0..kv.n_basis() {
            assert!((kv.basis(i, (i + 1) as f64).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((kv.basis(1, 1.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn repeated_knots_use_zero_over_zero() {
        let kv = KnotVector::new(vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0], 2).unwrap();
        let total: f64 = (0..3).map(|i| kv.basis(i, 0.3).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!((kv.basis(0, 0.3).unwrap() - 0.49).abs() < 1e-15);
    }

    #[test]
    fn index_and_knot_validation() {
        let kv = integer_knots(4, 1);
        assert!(matches!(kv.basis(2, 1.0), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(KnotVector::new(vec![0.0, 2.0, 1.0], 0).unwrap_err(), Error::UnsortedKnots);
        assert_eq!(KnotVector::new(vec![0.0, 1.0], 1).unwrap_err(), Error::TooFewKnots { len: 2, degree: 1 });
    }

    #[test]
    fn d1_small_cases() {
        let s = design_matrix_d1(&[0.0, 1.0]).unwrap();
        assert_eq!(s.entries, Matrix::identity(2));
        let s = design_matrix_d1(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let expected = Matrix::from_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.75, 0.25, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(s.entries, expected);
        assert!(s.entries.is_upper_bidiagonal());
        assert!(design_matrix_d1(&[0.5]).is_err());
        assert!(design_matrix_d1(&[0.0, 1.5, 1.0]).is_err());
    }

    #[test]
    fn d1_sixteen_is_nonsingular() {
        let xs: Vec<f64> = (0..16).map(|k| k as f64 / 15.0).collect();
        let s = design_matrix_d1(&xs).unwrap();
        // triangular: determinant is the product of the diagonal
        let det: f64 = (0..16).map(|k| s.entries.get(k, k)).product();
        assert!(det.abs() > 1e-12);
    }

    #[test]
    fn general_d0_has_one_unit_per_row() {
        let kv = KnotVector::<f64>::uniform(4, 0).unwrap();
        let pts = [0.1, 0.3, 0.6, 0.9];
        let s = design_matrix_general(&kv, &pts).unwrap();
        for k in 0..4 {
            assert_eq!(s.row(k).iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(s.row(k).iter().sum::<f64>(), 1.0);
        }
        assert!(design_matrix_general(&kv, &pts[..3]).is_err());
    }

    #[test]
    fn general_d1_is_banded_with_unit_rows() {
        let kv = KnotVector::<f64>::uniform(6, 1).unwrap();
        let (lo, hi) = kv.interior();
        let pts: Vec<f64> = (0..6).map(|k| lo + (hi - lo) * (k as f64 + 0.3) / 6.0).collect();
        let s = design_matrix_general(&kv, &pts).unwrap();
        for k in 0..6 {
            let nz: Vec<usize> = (0..6).filter(|&i| s.entries.get(k, i) != 0.0).collect();
            assert!(nz.len() <= 2 && nz.windows(2).all(|w| w[1] == w[0] + 1));
            assert!((s.row(k).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn general_d1_matches_explicit_form() {
        for k_dim in [2usize, 4, 8, 16] {
            let xs: Vec<f64> = (0..k_dim).map(|k| k as f64 / (k_dim - 1) as f64).collect();
            let explicit = design_matrix_d1(&xs).unwrap();
            let kv = KnotVector::uniform(k_dim, 1).unwrap();
            let pts = matched_points_d1(&kv, &xs).unwrap();
            let general = design_matrix_general(&kv, &pts).unwrap();
            assert!(general.entries.max_abs_diff(&explicit.entries) < 1e-12, "K={k_dim}");
        }
    }

    #[test]
    fn dilation_is_symmetric() {
        let s = design_matrix_d1(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let h = hermitian_dilation(&s).unwrap();
        assert_eq!(h.dim(), 8);
        assert_eq!(h.entries, h.entries.transpose());
        let id = DesignMatrix { entries: Matrix::<f64>::identity(2), points: vec![], knots: None, form: MatrixForm::General };
        let h = hermitian_dilation(&id).unwrap();
        assert_eq!(h.entries.as_slice()[2], 1.0);
        assert_eq!(h.entries.get(2, 0), 1.0);
        assert_eq!(dilate_rhs(&[1.0, 2.0]), vec![1.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn block_layout() {
        let s = block_diagonal(&[(0.5, 0.3), (0.2, 0.1)]).unwrap();
        assert_eq!(s.entries.get(0, 1), 0.5);
        assert_eq!(s.entries.get(1, 1), 0.7);
        assert_eq!(s.entries.get(1, 2), 0.0);
        assert_eq!(s.entries.get(2, 2), 0.8);
    }
}
