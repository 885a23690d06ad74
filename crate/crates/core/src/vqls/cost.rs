//! Global VQLS cost `C(θ) = 1 − |⟨Y|ψ⟩|² / ⟨ψ|ψ⟩`, `|ψ⟩ = S·V(θ)|0⟩`.

use super::ansatz::{ansatz_circuit, ansatz_real, AnsatzConfig};
use crate::decomp::{pauli_decompose, LcuDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rng::stream_seed;
use crate::scalar::Scalar;
use crate::sim::{amplitude_encode, hadamard_test, Circuit, Mode, QuantumState};

/// `⟨ψ|ψ⟩` below this is treated as `S·V(θ)|0⟩ = 0`.
const DEGENERATE_NORM: f64 = 1e-24;

/// The system matrix, as a dense matrix or as its LCU.
#[derive(Debug, Clone, Copy)]
pub enum SystemOperator<'a, T> {
    Dense(&'a Matrix<T>),
    Lcu(&'a LcuDecomposition<T>),
}

impl<T: Scalar> SystemOperator<'_, T> {
    fn dim(&self) -> usize {
        match self {
            SystemOperator::Dense(m) => m.rows(),
            SystemOperator::Lcu(d) => d.dimension(),
        }
    }

    fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        match self {
            SystemOperator::Dense(m) => m.mul_vec(v),
            SystemOperator::Lcu(d) => d.apply(v),
        }
    }
}

/// Evaluates the cost for one fixed system and target.
#[derive(Debug, Clone)]
pub struct CostModel<'a, T> {
    system: SystemOperator<'a, T>,
    ansatz: AnsatzConfig,
    y: Vec<T>,
    mode: Mode,
    shots: Option<ShotsModel<T>>,
}

#[derive(Debug, Clone)]
struct ShotsModel<T> {
    lcu: LcuDecomposition<T>,
    y_prep: Circuit<T>,
    term_circuits: Vec<Circuit<T>>,
}

impl<'a, T: Scalar> CostModel<'a, T> {
    pub fn new(system: SystemOperator<'a, T>, y_state: &QuantumState<T>, ansatz: AnsatzConfig, mode: Mode) -> Result<Self> {
        if let SystemOperator::Dense(m) = system {
            if !m.is_square() {
                return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
            }
        }
        let dim = system.dim();
        if y_state.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: y_state.dim() });
        }
        if ansatz.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: ansatz.dim() });
        }
        if y_state.max_imag() > T::tol(1e-12) {
            return Err(Error::ComplexInput);
        }
        let y = y_state.real_parts();
        let shots = match mode {
            Mode::Exact => None,
            Mode::Shots { .. } => {
                let lcu = match system {
                    SystemOperator::Lcu(d) => d.clone(),
                    SystemOperator::Dense(m) => pauli_decompose(m)?,
                };
                let term_circuits = lcu.terms.iter().map(|t| t.circuit()).collect::<Result<Vec<_>>>()?;
                Some(ShotsModel { y_prep: amplitude_encode(&y)?.circuit, lcu, term_circuits })
            }
        };
        Ok(Self { system, ansatz, y, mode, shots })
    }

    pub fn ansatz(&self) -> &AnsatzConfig {
        &self.ansatz
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Cost at `theta` in the configured mode.
    pub fn value(&self, theta: &[T]) -> Result<T> {
        match &self.shots {
            None => self.exact_value(theta),
            Some(model) => self.shots_value(model, theta),
        }
    }

    /// Exact cost from direct matrix–vector algebra.
    pub fn exact_value(&self, theta: &[T]) -> Result<T> {
        self.ansatz.check(theta.len())?;
        let mut v = Vec::with_capacity(self.ansatz.dim());
        ansatz_real(&self.ansatz, theta, &mut v);
        let psi = self.system.apply(&v)?;
        let (a, b) = (dot(&self.y, &psi), dot(&psi, &psi));
        if b < T::lit(DEGENERATE_NORM) {
            return Err(Error::Singular { pivot: b.sqrt().as_f64() });
        }
        Ok(clamp_unit(T::one() - a * a / b))
    }

    /// Exact cost and its gradient. Each `∂V/∂θ_j |0⟩` is obtained by the
    /// shift rule `½·V(θ + π e_j)|0⟩`, which is exact for Ry generators.
    pub fn exact_value_and_gradient(&self, theta: &[T]) -> Result<(T, Vec<T>)> {
        self.ansatz.check(theta.len())?;
        let mut v = Vec::with_capacity(self.ansatz.dim());
        ansatz_real(&self.ansatz, theta, &mut v);
        let psi = self.system.apply(&v)?;
        let (a, b) = (dot(&self.y, &psi), dot(&psi, &psi));
        if b < T::lit(DEGENERATE_NORM) {
            return Err(Error::Singular { pivot: b.sqrt().as_f64() });
        }
        let cost = clamp_unit(T::one() - a * a / b);
        let mut shifted = theta.to_vec();
        let mut dv = Vec::with_capacity(v.len());
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let mut grad = Vec::with_capacity(theta.len());
        for j in 0..theta.len() {
            shifted[j] = theta[j] + T::PI();
            ansatz_real(&self.ansatz, &shifted, &mut dv);
            shifted[j] = theta[j];
            let dpsi: Vec<T> = self.system.apply(&dv)?.into_iter().map(|x| x * half).collect();
            let da = dot(&self.y, &dpsi);
            let db = two * dot(&psi, &dpsi);
            grad.push(-(two * a * da * b - a * a * db) / (b * b));
        }
        Ok((cost, grad))
    }

    /// Shots estimate: `⟨ψ|ψ⟩ = Σ_jk c_j c_k Re⟨A_j V|A_k V⟩` and
    /// `⟨Y|ψ⟩ = Σ_j c_j Re⟨U_Y|A_j V⟩`, every overlap from a Hadamard test.
    /// Test `t` draws from stream `t` of the mode seed, so the estimate is a
    /// deterministic function of `θ`.
    fn shots_value(&self, model: &ShotsModel<T>, theta: &[T]) -> Result<T> {
        let Mode::Shots { shots, seed } = self.mode else { unreachable!("shots model without shots mode") };
        let n = self.ansatz.n_qubits;
        let v = ansatz_circuit(&self.ansatz, theta)?;
        let preps: Vec<Circuit<T>> = model
            .term_circuits
            .iter()
            .map(|tc| {
                let mut c = v.clone();
                c.extend(tc)?;
                Ok(c)
            })
            .collect::<Result<_>>()?;
        let coeffs: Vec<T> = model.lcu.terms.iter().map(|t| t.coefficient).collect();
        let mut stream = 0u64;
        let mut next_mode = || {
            stream += 1;
            Mode::Shots { shots, seed: stream_seed(seed, stream) }
        };
        let mut b = coeffs.iter().map(|&c| c * c).sum::<T>();
        for j in 0..preps.len() {
            for k in j + 1..preps.len() {
                let overlap = hadamard_test(&preps[j], &preps[k], n, next_mode())?;
                b = b + T::lit(2.0) * coeffs[j] * coeffs[k] * overlap;
            }
        }
        let mut a = T::zero();
        for (j, prep) in preps.iter().enumerate() {
            a = a + coeffs[j] * hadamard_test(&model.y_prep, prep, n, next_mode())?;
        }
        if b <= T::lit(DEGENERATE_NORM) {
            return Err(Error::Singular { pivot: b.max(T::zero()).sqrt().as_f64() });
        }
        Ok(clamp_unit(T::one() - a * a / b))
    }
}

fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// One-shot form of [`CostModel::value`].
pub fn cost_global<T: Scalar>(
    system: SystemOperator<'_, T>,
    y_state: &QuantumState<T>,
    config: &AnsatzConfig,
    theta: &[T],
    mode: Mode,
) -> Result<T> {
    CostModel::new(system, y_state, *config, mode)?.value(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::design_matrix_d1;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_at_solution_costs_zero() {
        let id = Matrix::identity(4);
        let y = QuantumState::zero(2).unwrap();
        let cfg = AnsatzConfig::new(2, 1);
        let c = cost_global(SystemOperator::Dense(&id), &y, &cfg, &[0.0; 4], Mode::Exact).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn orthogonal_proposal_costs_one() {
        let id = Matrix::identity(2);
        let y = QuantumState::zero(1).unwrap();
        let cfg = AnsatzConfig::new(1, 0);
        let c = cost_global(SystemOperator::Dense(&id), &y, &cfg, &[std::f64::consts::PI], Mode::Exact).unwrap();
        assert!((c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sign_of_target_does_not_matter() {
        let s = design_matrix_d1::<f64>(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let y = QuantumState::normalized_from_real(&[0.1, 0.4, 0.7, 1.0]).unwrap();
        let cfg = AnsatzConfig::new(2, 1);
        let theta = [0.3, 1.1, -0.4, 2.0];
        let a = cost_global(SystemOperator::Dense(&s.entries), &y, &cfg, &theta, Mode::Exact).unwrap();
        let b = cost_global(SystemOperator::Dense(&s.entries), &y.negated(), &cfg, &theta, Mode::Exact).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn dense_and_lcu_agree() {
        let s = design_matrix_d1::<f64>(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let lcu = pauli_decompose(&s.entries).unwrap();
        let y = QuantumState::normalized_from_real(&[0.1, 0.4, 0.7, 1.0]).unwrap();
        let cfg = AnsatzConfig::new(2, 1);
        let theta = [0.3, 1.1, -0.4, 2.0];
        let a = cost_global(SystemOperator::Dense(&s.entries), &y, &cfg, &theta, Mode::Exact).unwrap();
        let b = cost_global(SystemOperator::Lcu(&lcu), &y, &cfg, &theta, Mode::Exact).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn shift_rule_gradient_matches_central_differences() {
        let xs: Vec<f64> = (0..8).map(|k| k as f64 / 7.0).collect();
        let s = design_matrix_d1(&xs).unwrap();
        let y = QuantumState::normalized_from_real(&xs.iter().map(|x| 0.2 + x * x).collect::<Vec<_>>()).unwrap();
        let cfg = AnsatzConfig::new(3, 2);
        let model = CostModel::new(SystemOperator::Dense(&s.entries), &y, cfg, Mode::Exact).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let theta: Vec<f64> = (0..cfg.parameter_count()).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let (_, grad) = model.exact_value_and_gradient(&theta).unwrap();
            for j in 0..theta.len() {
                let h = 1e-5;
                let mut p = theta.clone();
                p[j] += h;
                let up = model.exact_value(&p).unwrap();
                p[j] -= 2.0 * h;
                let down = model.exact_value(&p).unwrap();
                let fd = (up - down) / (2.0 * h);
                assert!((fd - grad[j]).abs() <= 1e-6 * grad[j].abs().max(1e-3), "j={j}: {fd} vs {}", grad[j]);
            }
        }
    }

    #[test]
    fn shots_cost_tracks_exact_cost() {
        let s = design_matrix_d1::<f64>(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let y = QuantumState::normalized_from_real(&[0.1, 0.4, 0.7, 1.0]).unwrap();
        let cfg = AnsatzConfig::new(2, 1);
        let theta = [0.3, 1.1, -0.4, 2.0];
        let exact = cost_global(SystemOperator::Dense(&s.entries), &y, &cfg, &theta, Mode::Exact).unwrap();
        let mode = Mode::Shots { shots: 200_000, seed: 4 };
        let shots = cost_global(SystemOperator::Dense(&s.entries), &y, &cfg, &theta, mode).unwrap();
        assert!((exact - shots).abs() < 0.05, "{exact} vs {shots}");
        let again = cost_global(SystemOperator::Dense(&s.entries), &y, &cfg, &theta, mode).unwrap();
        assert_eq!(shots, again);
    }

    #[test]
    fn zero_operator_is_singular() {
        let z = Matrix::zeros(2, 2);
        let y = QuantumState::zero(1).unwrap();
        let cfg = AnsatzConfig::new(1, 0);
        assert!(matches!(
            cost_global(SystemOperator::Dense(&z), &y, &cfg, &[0.1], Mode::Exact),
            Err(Error::Singular { .. })
        ));
        let id = Matrix::identity(4);
        assert!(cost_global(SystemOperator::Dense(&id), &y, &cfg, &[0.1], Mode::Exact).is_err());
    }
}
