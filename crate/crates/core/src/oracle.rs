//! Classical ground truth for `Sβ = Y`.

use crate::error::{Error, Result};
use crate::functions::{mean_bias, nrmse, TargetKind};
use crate::linalg::{norm, Matrix};
use crate::pipeline::SplineProblem;
use crate::report::{FitPoint, FitReport, RunInfo};
use crate::scalar::Scalar;

/// Pivots smaller than this mark the matrix as singular.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    BackSubstitution,
    PartialPivot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution<T> {
    pub beta: Vec<T>,
    /// `‖Sβ − Y‖₂`.
    pub residual: T,
    pub method: SolveMethod,
}

fn upper_triangular<T: Scalar>(s: &Matrix<T>) -> bool {
    (0..s.rows()).all(|r| (0..r).all(|c| s.get(r, c) == T::zero()))
}

/// Solves `Sβ = Y`: back-substitution when `S` is upper triangular (this
/// covers the bidiagonal spline systems), Gaussian elimination with partial
/// pivoting otherwise.
pub fn solve_exact<T: Scalar>(s: &Matrix<T>, y: &[T]) -> Result<ExactSolution<T>> {
    check_system(s, y)?;
    let (beta, method) = if upper_triangular(s) {
        (back_substitution(s, y)?, SolveMethod::BackSubstitution)
    } else {
        (partial_pivot_solve(s, y)?, SolveMethod::PartialPivot)
    };
    let residual = residual(s, &beta, y)?;
    Ok(ExactSolution { beta, residual, method })
}

fn check_system<T: Scalar>(s: &Matrix<T>, y: &[T]) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch { expected: s.rows(), got: s.cols() });
    }
    if y.len() != s.rows() {
        return Err(Error::DimensionMismatch { expected: s.rows(), got: y.len() });
    }
    Ok(())
}

pub fn residual<T: Scalar>(s: &Matrix<T>, beta: &[T], y: &[T]) -> Result<T> {
    let sb = s.mul_vec(beta)?;
    Ok(norm(&sb.iter().zip(y).map(|(&a, &b)| a - b).collect::<Vec<_>>()))
}

/// Back-substitution for an upper-triangular system.
pub fn back_substitution<T: Scalar>(s: &Matrix<T>, y: &[T]) -> Result<Vec<T>> {
    check_system(s, y)?;
    let n = s.rows();
    let mut beta = vec![T::zero(); n];
    for r in (0..n).rev() {
        let pivot = s.get(r, r);
        if pivot.abs() < T::lit(PIVOT_TOL) {
            return Err(Error::Singular { pivot: pivot.abs().as_f64() });
        }
        let tail: T = (r + 1..n).map(|c| s.get(r, c) * beta[c]).sum();
        beta[r] = (y[r] - tail) / pivot;
    }
    Ok(beta)
}

/// Gaussian elimination with partial (row) pivoting.
pub fn partial_pivot_solve<T: Scalar>(s: &Matrix<T>, y: &[T]) -> Result<Vec<T>> {
    check_system(s, y)?;
    let n = s.rows();
    let mut a: Vec<Vec<T>> = (0..n).map(|r| s.row(r).to_vec()).collect();
    let mut b = y.to_vec();
    for col in 0..n {
        let (p, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot < T::lit(PIVOT_TOL) {
            return Err(Error::Singular { pivot: pivot.as_f64() });
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for c in col..n {
                a[r][c] = a[r][c] - factor * a[col][c];
            }
            b[r] = b[r] - factor * b[col];
        }
    }
    let mut beta = vec![T::zero(); n];
    for r in (0..n).rev() {
        let tail: T = (r + 1..n).map(|c| a[r][c] * beta[c]).sum();
        beta[r] = (b[r] - tail) / a[r][r];
    }
    Ok(beta)
}

/// Fully classical fit of `kind` on `k` points: solves the square system
/// exactly and evaluates `Sβ`. Because the system interpolates, the NRMSE
/// is at rounding level; it is the floor the variational pipeline is
/// measured against.
pub fn fit_classical<T: Scalar>(kind: TargetKind, k: usize, degree: usize) -> Result<FitReport<T>> {
    let started = std::time::Instant::now();
    let problem = SplineProblem::<T>::build(kind, k, degree)?;
    let solution = solve_exact(&problem.design.entries, &problem.targets)?;
    let estimates = problem.design.entries.mul_vec(&solution.beta)?;
    let error = nrmse(&estimates, &problem.targets)?;
    let points = problem
        .inputs
        .iter()
        .zip(&problem.targets)
        .zip(&estimates)
        .map(|((&x, &y), &y_hat)| FitPoint { x, y, y_hat })
        .collect();
    Ok(FitReport {
        function: kind,
        knots: k,
        degree,
        domain: problem.function.domain,
        points,
        nrmse: error,
        classical_nrmse: error,
        final_cost: None,
        converged: true,
        mean_bias: mean_bias(&estimates, &problem.targets),
        run: RunInfo::classical(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
