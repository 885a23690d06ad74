//! Variational linear solver: finds `θ` with `S·V(θ)|0⟩ ∝ |Y⟩`.

mod ansatz;
mod cost;
mod optimize;

pub use ansatz::{ansatz_circuit, ansatz_state, AnsatzConfig, Entangler};
pub use cost::{cost_global, CostModel, SystemOperator};
pub use optimize::{minimize, GradientMethod, Objective, OptimizeOptions, OptimizerKind, Outcome};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{norm, Matrix};
use crate::oracle::solve_exact;
use crate::rng::stream_rng;
use crate::scalar::Scalar;
use crate::sim::{Mode, QuantumState};

/// Optimiser and restart settings for [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub mode: Mode,
    pub optimizer: OptimizerKind,
    /// `None` picks the shift rule in exact mode and finite differences in shots mode.
    pub gradient: Option<GradientMethod>,
    /// Initial step for gradient descent.
    pub learning_rate: f64,
    /// Central-difference step.
    pub fd_step: f64,
    pub max_iterations: usize,
    /// Minimum cost improvement over `stall_window` iterations.
    pub tolerance: f64,
    pub stall_window: usize,
    /// A restart stops early once its cost drops to this value.
    pub cost_floor: f64,
    pub restarts: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Exact,
            optimizer: OptimizerKind::Bfgs,
            gradient: None,
            learning_rate: 0.1,
            fd_step: 1e-4,
            max_iterations: 10_000,
            tolerance: 1e-12,
            stall_window: 25,
            cost_floor: 1e-14,
            restarts: 5,
            seed: 42,
            parallel: true,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("{what} must be positive")));
        if self.restarts == 0 {
            return bad("restarts");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations");
        }
        if self.stall_window == 0 {
            return bad("stall_window");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance");
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning_rate");
        }
        if !(self.fd_step > 0.0) {
            return bad("fd_step");
        }
        if let Some(GradientMethod::FiniteDifference(h)) = self.gradient {
            if !(h > 0.0) {
                return bad("finite-difference step");
            }
        }
        if let Mode::Shots { shots: 0, .. } = self.mode {
            return bad("shots");
        }
        if matches!(self.mode, Mode::Shots { .. }) && self.gradient == Some(GradientMethod::ParameterShift) {
            return Err(Error::InvalidArgument("the shift-rule gradient needs exact mode".into()));
        }
        Ok(())
    }

    fn gradient_method(&self) -> GradientMethod {
        self.gradient.unwrap_or(match self.mode {
            Mode::Exact => GradientMethod::ParameterShift,
            Mode::Shots { .. } => GradientMethod::FiniteDifference(self.fd_step),
        })
    }

    fn options(&self) -> OptimizeOptions {
        OptimizeOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            window: self.stall_window,
            cost_floor: self.cost_floor,
            learning_rate: self.learning_rate,
            simplex_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqlsSolution<T> {
    pub theta_opt: Vec<T>,
    /// `V(θ_opt)|0⟩`.
    pub beta_state: QuantumState<T>,
    pub final_cost: T,
    /// Cost per iteration of the winning restart; non-increasing.
    pub cost_trace: Vec<T>,
    pub restarts_used: usize,
    pub restart_costs: Vec<T>,
    pub best_restart: usize,
    /// Whether the winning restart met its stopping rule before the iteration cap.
    pub converged: bool,
    pub iterations: usize,
    pub seed: u64,
}

struct Problem<'m, 'a, T> {
    model: &'m CostModel<'a, T>,
    gradient: GradientMethod,
}

impl<T: Scalar> Objective<T> for Problem<'_, '_, T> {
    fn value(&self, x: &[T]) -> Result<T> {
        self.model.value(x)
    }

    fn value_and_gradient(&self, x: &[T]) -> Result<(T, Vec<T>)> {
        match self.gradient {
            GradientMethod::ParameterShift => self.model.exact_value_and_gradient(x),
            GradientMethod::FiniteDifference(h) => {
                let h = T::lit(h);
                let mut p = x.to_vec();
                let mut grad = Vec::with_capacity(x.len());
                for j in 0..x.len() {
                    p[j] = x[j] + h;
                    let up = self.model.value(&p)?;
                    p[j] = x[j] - h;
                    let down = self.model.value(&p)?;
                    p[j] = x[j];
                    grad.push((up - down) / (h + h));
                }
                Ok((self.model.value(x)?, grad))
            }
        }
    }
}

/// Initial angles of restart `r`: uniform on `[0, 2π)` from stream `r` of the seed.
pub fn initial_theta<T: Scalar>(seed: u64, restart: usize, count: usize) -> Vec<T> {
    let mut rng = stream_rng(seed, restart as u64);
    (0..count).map(|_| T::lit(rng.random_range(0.0..std::f64::consts::TAU))).collect()
}

/// Solves `S|β⟩ ∝ Y` variationally. `Y` is normalised internally. All
/// restarts run to completion; the lowest final cost wins, ties going to the
/// lower restart index.
pub fn solve<T: Scalar>(s: &Matrix<T>, y: &[T], config: &SolveConfig, ansatz: &AnsatzConfig) -> Result<VqlsSolution<T>> {
    config.validate()?;
    if !s.is_square() {
        return Err(Error::DimensionMismatch { expected: s.rows(), got: s.cols() });
    }
    if s.rows() != ansatz.dim() {
        return Err(Error::DimensionMismatch { expected: s.rows(), got: ansatz.dim() });
    }
    // singularity check; the classical solution itself is not used
    solve_exact(s, y)?;
    if norm(y) == T::zero() {
        return Err(Error::ZeroVector);
    }
    let y_state = QuantumState::normalized_from_real(y)?;
    let model = CostModel::new(SystemOperator::Dense(s), &y_state, *ansatz, config.mode)?;
    let problem = Problem { model: &model, gradient: config.gradient_method() };
    let options = config.options();
    let run = |r: usize| -> Result<Outcome<T>> {
        let start = initial_theta(config.seed, r, ansatz.parameter_count());
        minimize(config.optimizer, &problem, &start, &options)
    };
    let outcomes: Vec<Outcome<T>> = if config.parallel {
        (0..config.restarts).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..config.restarts).map(run).collect::<Result<_>>()?
    };
    let best_restart = outcomes
        .iter()
        .enumerate()
        .fold(0, |best, (i, o)| if o.cost < outcomes[best].cost { i } else { best });
    let restart_costs = outcomes.iter().map(|o| o.cost).collect();
    let best = outcomes.into_iter().nth(best_restart).expect("at least one restart");
    Ok(VqlsSolution {
        beta_state: ansatz_state(ansatz, &best.theta)?,
        theta_opt: best.theta,
        final_cost: best.cost,
        cost_trace: best.trace,
        restarts_used: config.restarts,
        restart_costs,
        best_restart,
        converged: best.converged,
        iterations: best.iterations,
        seed: config.seed,
    })
}
