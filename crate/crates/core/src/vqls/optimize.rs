//! Classical minimisers for the VQLS parameter loop.
//!
//! Every optimiser keeps the best point seen, so the recorded cost trace is
//! non-increasing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptimizerKind {
    /// Quasi-Newton with Armijo backtracking.
    #[default]
    Bfgs,
    /// Steepest descent with backtracking step halving.
    GradientDescent,
    /// Nelder–Mead simplex; derivative free.
    NelderMead,
}

impl OptimizerKind {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Bfgs => "bfgs",
            OptimizerKind::GradientDescent => "gradient-descent",
            OptimizerKind::NelderMead => "simplex",
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfgs" => Ok(OptimizerKind::Bfgs),
            "gradient-descent" | "gd" => Ok(OptimizerKind::GradientDescent),
            "simplex" | "nelder-mead" => Ok(OptimizerKind::NelderMead),
            other => Err(Error::InvalidArgument(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// How gradient-based optimisers obtain derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMethod {
    /// Shift-rule state derivatives (exact mode only).
    ParameterShift,
    /// Central differences with the given step.
    FiniteDifference(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub max_iterations: usize,
    /// Stop once the best cost improved by less than this over `window` iterations.
    pub tolerance: f64,
    pub window: usize,
    /// Stop once the cost is at or below this value.
    pub cost_floor: f64,
    pub learning_rate: f64,
    pub simplex_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub theta: Vec<T>,
    pub cost: T,
    pub trace: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Objective with optional gradient.
pub trait Objective<T> {
    fn value(&self, x: &[T]) -> Result<T>;
    fn value_and_gradient(&self, x: &[T]) -> Result<(T, Vec<T>)>;
}

struct Stall<T> {
    window: usize,
    tolerance: T,
}

impl<T: Scalar> Stall<T> {
    fn stalled(&self, trace: &[T]) -> bool {
        trace.len() > self.window && trace[trace.len() - 1 - self.window] - trace[trace.len() - 1] < self.tolerance
    }
}

pub fn minimize<T: Scalar>(
    kind: OptimizerKind,
    objective: &dyn Objective<T>,
    start: &[T],
    options: &OptimizeOptions,
) -> Result<Outcome<T>> {
    match kind {
        OptimizerKind::Bfgs => bfgs(objective, start, options),
        OptimizerKind::GradientDescent => gradient_descent(objective, start, options),
        OptimizerKind::NelderMead => nelder_mead(objective, start, options),
    }
}

fn axpy<T: Scalar>(x: &[T], alpha: T, p: &[T]) -> Vec<T> {
    x.iter().zip(p).map(|(&a, &b)| a + alpha * b).collect()
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn bfgs<T: Scalar>(objective: &dyn Objective<T>, start: &[T], options: &OptimizeOptions) -> Result<Outcome<T>> {
    let n = start.len();
    let stall = Stall { window: options.window, tolerance: T::lit(options.tolerance) };
    let floor = T::lit(options.cost_floor);
    let c1 = T::lit(1e-4);
    let identity = |h: &mut Vec<T>| {
        h.iter_mut().for_each(|v| *v = T::zero());
        (0..n).for_each(|i| h[i * n + i] = T::one());
    };
    let mut h = vec![T::zero(); n * n];
    identity(&mut h);
    let mut x = start.to_vec();
    let (mut f, mut g) = objective.value_and_gradient(&x)?;
    let mut trace = vec![f];
    let mut converged = false;
    let mut fresh = true;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        if f <= floor || g.iter().all(|v| v.abs() < T::lit(1e-12)) {
            converged = true;
            break;
        }
        iterations += 1;
        let mut p: Vec<T> = (0..n).map(|i| -(0..n).map(|j| h[i * n + j] * g[j]).sum::<T>()).collect();
        let mut slope = dot(&g, &p);
        if slope >= T::zero() {
            identity(&mut h);
            p = g.iter().map(|&v| -v).collect();
            slope = dot(&g, &p);
            fresh = true;
        }
        let mut alpha = T::one();
        let mut accepted = None;
        for _ in 0..60 {
            let trial = axpy(&x, alpha, &p);
            let ft = objective.value(&trial)?;
            if ft <= f + c1 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha = alpha * T::lit(0.5);
        }
        let Some((x_new, _)) = accepted else {
            if fresh {
                // no descent even along −g: stationary to working precision
                converged = true;
                break;
            }
            identity(&mut h);
            fresh = true;
            trace.push(f);
            continue;
        };
        let (f_new, g_new) = objective.value_and_gradient(&x_new)?;
        let s: Vec<T> = x_new.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let y: Vec<T> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > T::epsilon() * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            let rho = T::one() / sy;
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let hy: Vec<T> = (0..n).map(|i| (0..n).map(|j| h[i * n + j] * y[j]).sum()).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] = h[i * n + j] - rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }
        x = x_new;
        f = f_new;
        g = g_new;
        trace.push(f);
        if stall.stalled(&trace) {
            converged = true;
            break;
        }
    }
    Ok(Outcome { theta: x, cost: f, trace, iterations, converged })
}

fn gradient_descent<T: Scalar>(objective: &dyn Objective<T>, start: &[T], options: &OptimizeOptions) -> Result<Outcome<T>> {
    let stall = Stall { window: options.window, tolerance: T::lit(options.tolerance) };
    let floor = T::lit(options.cost_floor);
    let base_rate = T::lit(options.learning_rate);
    let mut rate = base_rate;
    let mut x = start.to_vec();
    let (mut f, mut g) = objective.value_and_gradient(&x)?;
    let mut trace = vec![f];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        if f <= floor {
            converged = true;
            break;
        }
        iterations += 1;
        let mut step = rate;
        let mut accepted = None;
        while step > T::lit(1e-12) {
            let trial = axpy(&x, -step, &g);
            let ft = objective.value(&trial)?;
            if ft < f {
                accepted = Some(trial);
                break;
            }
            step = step * T::lit(0.5);
        }
        let Some(x_new) = accepted else {
            converged = true;
            break;
        };
        // let the rate recover after a halving, up to the configured value
        rate = (step * T::lit(2.0)).min(base_rate);
        x = x_new;
        (f, g) = objective.value_and_gradient(&x)?;
        trace.push(f);
        if stall.stalled(&trace) {
            converged = true;
            break;
        }
    }
    Ok(Outcome { theta: x, cost: f, trace, iterations, converged })
}

fn nelder_mead<T: Scalar>(objective: &dyn Objective<T>, start: &[T], options: &OptimizeOptions) -> Result<Outcome<T>> {
    let n = start.len();
    let floor = T::lit(options.cost_floor);
    let stall = Stall { window: options.window.max(2 * n), tolerance: T::lit(options.tolerance) };
    let half = T::lit(0.5);
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), objective.value(start)?));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] = v[i] + T::lit(options.simplex_step);
        let fv = objective.value(&v)?;
        simplex.push((v, fv));
    }
    let order = |s: &mut Vec<(Vec<T>, T)>| s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    order(&mut simplex);
    let mut trace = vec![simplex[0].1];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        if simplex[0].1 <= floor {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: Vec<T> = (0..n).map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<T>() / T::lit(n as f64)).collect();
        let worst = simplex[n].clone();
        let toward = |t: T| -> Vec<T> { centroid.iter().zip(&worst.0).map(|(&c, &w)| c + t * (c - w)).collect() };
        let reflected = toward(T::one());
        let fr = objective.value(&reflected)?;
        if fr < simplex[0].1 {
            let expanded = toward(T::lit(2.0));
            let fe = objective.value(&expanded)?;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst.1 {
                let c = toward(half);
                let fc = objective.value(&c)?;
                (c, fc)
            } else {
                let c = toward(-half);
                let fc = objective.value(&c)?;
                (c, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<T> = best.iter().zip(&entry.0).map(|(&b, &v)| b + half * (v - b)).collect();
                    let fs = objective.value(&shrunk)?;
                    *entry = (shrunk, fs);
                }
            }
        }
        order(&mut simplex);
        trace.push(simplex[0].1);
        let spread = simplex[n].1 - simplex[0].1;
        if spread < T::lit(options.tolerance) * T::lit(1e-3) && stall.stalled(&trace) {
            converged = true;
            break;
        }
    }
    let (theta, cost) = simplex.swap_remove(0);
    Ok(Outcome { theta, cost, trace, iterations, converged })
}
