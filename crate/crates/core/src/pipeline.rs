//! End-to-end fit: target samples, spline system, variational solve, readout.

use std::time::Instant;

use crate::bspline::{design_matrix_d1, dilate_rhs, hermitian_dilation, DesignMatrix};
use crate::error::{Error, Result};
use crate::functions::{mean_bias, nrmse, sample_grid, target_values, TargetFunction, TargetKind};
use crate::linalg::norm;
use crate::oracle::{fit_classical, solve_exact};
use crate::readout::recover_estimates;
use crate::report::{FitPoint, FitReport, RunInfo};
use crate::rng::{stream_seed, RNG_ALGORITHM};
use crate::scalar::Scalar;
use crate::sim::{Mode, QuantumState};
use crate::vqls::{solve, AnsatzConfig, Entangler, SolveConfig};

/// Largest supported system (6 qubits).
pub const MAX_KNOTS: usize = 64;

/// Stream reserved for measurement sampling, apart from the restart streams.
const SHOTS_STREAM: u64 = 1 << 32;

/// Shots mode whose sampling seed is derived from the run seed.
pub fn shots_mode(shots: u64, run_seed: u64) -> Mode {
    Mode::Shots { shots, seed: stream_seed(run_seed, SHOTS_STREAM) }
}

/// The square interpolation system for one target function.
#[derive(Debug, Clone)]
pub struct SplineProblem<T> {
    pub function: TargetFunction<T>,
    /// Sample inputs mapped onto `[0, 1]`.
    pub inputs: Vec<T>,
    /// Sample inputs in the function's own domain.
    pub raw_inputs: Vec<T>,
    /// Normalised targets in `[0, 1]`.
    pub targets: Vec<T>,
    pub design: DesignMatrix<T>,
}

impl<T: Scalar> SplineProblem<T> {
    /// `k` evenly spaced samples on the default domain of `kind`.
    pub fn build(kind: TargetKind, k: usize, degree: usize) -> Result<Self> {
        if degree != 1 {
            return Err(Error::InvalidArgument(format!("only degree 1 is supported, got {degree}")));
        }
        let function = TargetFunction::with_default_domain(kind)?;
        let raw_inputs = sample_grid(k, function.domain)?;
        let inputs = sample_grid(k, (T::zero(), T::one()))?;
        let targets = target_values(&function, &raw_inputs)?;
        let design = design_matrix_d1(&inputs)?;
        Ok(Self { function, inputs, raw_inputs, targets, design })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub function: TargetKind,
    pub knots: usize,
    pub degree: usize,
    pub solve: SolveConfig,
    /// `None` uses [`AnsatzConfig::default_layers`].
    pub layers: Option<usize>,
    pub entangler: Entangler,
    /// Solve the Hermitian dilation `[[0, S], [Sᵀ, 0]]` on one extra qubit.
    pub dilation: bool,
    pub classical_only: bool,
}

impl FitConfig {
    pub fn new(function: TargetKind, knots: usize) -> Self {
        Self {
            function,
            knots,
            degree: 1,
            solve: SolveConfig::default(),
            layers: None,
            entangler: Entangler::default(),
            dilation: false,
            classical_only: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.knots.is_power_of_two() || !(2..=MAX_KNOTS).contains(&self.knots) {
            return Err(Error::InvalidArgument(format!(
                "knots must be a power of two between 2 and {MAX_KNOTS}, got {}",
                self.knots
            )));
        }
        self.solve.validate()
    }

    fn run_info(&self, layers: usize) -> RunInfo {
        RunInfo {
            mode: self.solve.mode,
            seed: self.solve.seed,
            restarts: self.solve.restarts,
            layers,
            entangler: self.entangler,
            optimizer: self.solve.optimizer,
            max_iterations: self.solve.max_iterations,
            dilation: self.dilation,
            classical_only: self.classical_only,
            rng: RNG_ALGORITHM,
        }
    }
}

/// Runs one fit. Reported values are in normalised target units.
pub fn fit<T: Scalar>(config: &FitConfig) -> Result<FitReport<T>> {
    config.validate()?;
    if config.classical_only {
        let mut report = fit_classical::<T>(config.function, config.knots, config.degree)?;
        report.run = RunInfo { seed: config.solve.seed, ..RunInfo::classical() };
        return Ok(report);
    }
    let started = Instant::now();
    let problem = SplineProblem::<T>::build(config.function, config.knots, config.degree)?;
    let y = &problem.targets;
    let y_len = norm(y);
    if y_len == T::zero() {
        return Err(Error::ZeroVector);
    }
    let y_norm: Vec<T> = y.iter().map(|&v| v / y_len).collect();

    let system_qubits = config.knots.trailing_zeros() as usize + usize::from(config.dilation);
    let layers = config.layers.unwrap_or_else(|| AnsatzConfig::default_layers(system_qubits));
    let ansatz = AnsatzConfig { n_qubits: system_qubits, layers, entangler: config.entangler };

    let (solution, beta_state) = if config.dilation {
        let h = hermitian_dilation(&problem.design)?;
        let sol = solve(&h.entries, &dilate_rhs(y), &config.solve, &ansatz)?;
        // [[0, S], [Sᵀ, 0]]·(u, v) = (Y, 0) gives v = β
        let half = config.knots;
        let tail = sol.beta_state.real_parts()[half..].to_vec();
        let beta = QuantumState::normalized_from_real(&tail)?;
        (sol, beta)
    } else {
        let sol = solve(&problem.design.entries, y, &config.solve, &ansatz)?;
        let beta = sol.beta_state.clone();
        (sol, beta)
    };

    let estimates = recover_estimates(&problem.design, &beta_state, &y_norm, config.solve.mode)?;
    let y_hat: Vec<T> = estimates.values.iter().map(|&v| v * y_len).collect();
    let error = nrmse(&y_hat, y)?;

    let exact = solve_exact(&problem.design.entries, y)?;
    let classical = nrmse(&problem.design.entries.mul_vec(&exact.beta)?, y)?;

    let points = problem
        .inputs
        .iter()
        .zip(y)
        .zip(&y_hat)
        .map(|((&x, &y), &y_hat)| FitPoint { x, y, y_hat })
        .collect();
    Ok(FitReport {
        function: config.function,
        knots: config.knots,
        degree: config.degree,
        domain: problem.function.domain,
        points,
        nrmse: error,
        classical_nrmse: classical,
        final_cost: Some(solution.final_cost),
        converged: solution.converged,
        mean_bias: mean_bias(&y_hat, y),
        run: config.run_info(layers),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_shapes() {
        let p = SplineProblem::<f64>::build(TargetKind::Sin, 8, 1).unwrap();
        assert_eq!(p.inputs.len(), 8);
        assert_eq!(p.design.dim(), 8);
        assert_eq!(p.inputs[0], 0.0);
        assert_eq!(p.inputs[7], 1.0);
        assert!(SplineProblem::<f64>::build(TargetKind::Sin, 8, 2).is_err());
    }

    #[test]
    fn knot_count_is_validated() {
        for k in [0, 1, 3, 12, 128] {
            assert!(fit::<f64>(&FitConfig::new(TargetKind::Relu, k)).is_err(), "K={k}");
        }
    }

    #[test]
    fn small_fit_is_accurate() {
        let r = fit::<f64>(&FitConfig::new(TargetKind::Sigmoid, 4)).unwrap();
        assert!(r.nrmse < 1e-6, "{}", r.nrmse);
        assert_eq!(r.points.len(), 4);
        assert!((r.recompute_nrmse().unwrap() - r.nrmse).abs() < 1e-12);
        assert!(r.classical_nrmse < 1e-12);
    }

    #[test]
    fn dilated_fit_agrees() {
        let cfg = FitConfig { dilation: true, ..FitConfig::new(TargetKind::Sin, 4) };
        let r = fit::<f64>(&cfg).unwrap();
        assert!(r.nrmse < 1e-4, "{}", r.nrmse);
    }

    #[test]
    fn classical_only_has_no_cost() {
        let cfg = FitConfig { classical_only: true, ..FitConfig::new(TargetKind::Elu, 16) };
        let r = fit::<f64>(&cfg).unwrap();
        assert!(r.final_cost.is_none());
        assert!(r.nrmse < 1e-10);
        assert_eq!(r.run.seed, 42);
    }
}
