//! Target activation functions, sampling grids and the NRMSE metric.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Functions the benchmark fits. The lowercase names are stable CLI identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetKind {
    Sigmoid,
    Relu,
    Elu,
    Sin,
}

impl TargetKind {
    /// Table column order: elu, relu, sigmoid, sin.
    pub const ALL: [TargetKind; 4] = [TargetKind::Elu, TargetKind::Relu, TargetKind::Sigmoid, TargetKind::Sin];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Sigmoid => "sigmoid",
            TargetKind::Relu => "relu",
            TargetKind::Elu => "elu",
            TargetKind::Sin => "sin",
        }
    }

    /// Raw input window: sigmoid on `[−5, 5]`, relu and elu on `[−1, 1]`,
    /// sin on `[0, π]`.
    pub fn default_domain<T: Scalar>(self) -> (T, T) {
        match self {
            TargetKind::Sigmoid => (T::lit(-5.0), T::lit(5.0)),
            TargetKind::Relu | TargetKind::Elu => (-T::one(), T::one()),
            TargetKind::Sin => (T::zero(), T::PI()),
        }
    }

    /// Raw function value. `elu` uses `α = 1`.
    pub fn eval<T: Scalar>(self, z: T) -> T {
        match self {
            TargetKind::Sigmoid => T::one() / (T::one() + (-z).exp()),
            TargetKind::Relu => z.max(T::zero()),
            TargetKind::Elu => {
                if z > T::zero() {
                    z
                } else {
                    z.exp_m1()
                }
            }
            TargetKind::Sin => z.sin(),
        }
    }

    /// Exact `(min, max)` of the function over `[lo, hi]`.
    fn range<T: Scalar>(self, lo: T, hi: T) -> (T, T) {
        match self {
            TargetKind::Sin => {
                let (mut min, mut max) = (lo.sin().min(hi.sin()), lo.sin().max(hi.sin()));
                // interior extrema at π/2 + jπ
                let first = ((lo - T::FRAC_PI_2()) / T::PI()).ceil();
                let mut j = first;
                while T::FRAC_PI_2() + j * T::PI() <= hi {
                    let v = (T::FRAC_PI_2() + j * T::PI()).sin();
                    min = min.min(v);
                    max = max.max(v);
                    j = j + T::one();
                }
                (min, max)
            }
            // monotone non-decreasing
            _ => (self.eval(lo), self.eval(hi)),
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigmoid" => Ok(TargetKind::Sigmoid),
            "relu" => Ok(TargetKind::Relu),
            "elu" => Ok(TargetKind::Elu),
            "sin" => Ok(TargetKind::Sin),
            other => Err(Error::InvalidArgument(format!("unknown function `{other}` (expected sigmoid, relu, elu or sin)"))),
        }
    }
}

/// Min–max map of raw function values onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization<T> {
    pub min: T,
    pub max: T,
}

impl<T: Scalar> Normalization<T> {
    pub fn new(min: T, max: T) -> Result<Self> {
        if !(max > min) {
            return Err(Error::DegenerateRange);
        }
        Ok(Self { min, max })
    }

    pub fn normalize(&self, v: T) -> T {
        (v - self.min) / (self.max - self.min)
    }

    pub fn denormalize(&self, u: T) -> T {
        self.min + u * (self.max - self.min)
    }
}

/// A target function on a raw input window, with its recorded normalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetFunction<T> {
    pub kind: TargetKind,
    pub domain: (T, T),
    pub normalization: Normalization<T>,
}

impl<T: Scalar> TargetFunction<T> {
    pub fn new(kind: TargetKind, domain: (T, T)) -> Result<Self> {
        if !(domain.1 > domain.0) {
            return Err(Error::InvalidArgument("domain must satisfy lo < hi".into()));
        }
        let (min, max) = kind.range(domain.0, domain.1);
        Ok(Self { kind, domain, normalization: Normalization::new(min, max)? })
    }

    pub fn with_default_domain(kind: TargetKind) -> Result<Self> {
        Self::new(kind, kind.default_domain())
    }

    /// Affine map of a raw input onto `[0, 1]`.
    pub fn unit_input(&self, z: T) -> T {
        (z - self.domain.0) / (self.domain.1 - self.domain.0)
    }
}

/// `k` evenly spaced points on `[lo, hi]`, both ends included.
pub fn sample_grid<T: Scalar>(k: usize, domain: (T, T)) -> Result<Vec<T>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {k}")));
    }
    let (lo, hi) = domain;
    let last = T::lit((k - 1) as f64);
    Ok((0..k)
        .map(|j| {
            // mirror-symmetric evaluation keeps the grid symmetric about the midpoint
            let t = T::lit(j as f64) / last;
            let s = T::lit((k - 1 - j) as f64) / last;
            lo * s + hi * t
        })
        .collect())
}

/// Normalised function values at raw inputs `xs`.
pub fn target_values<T: Scalar>(f: &TargetFunction<T>, xs: &[T]) -> Result<Vec<T>> {
    let (lo, hi) = f.domain;
    let slack = T::tol(1e-12) * (hi - lo).abs().max(T::one());
    if xs.iter().any(|&x| x < lo - slack || x > hi + slack) {
        return Err(Error::InvalidArgument("input outside the function domain".into()));
    }
    Ok(xs
        .iter()
        .map(|&x| f.normalization.normalize(f.kind.eval(x)).max(T::zero()).min(T::one()))
        .collect())
}

/// `sqrt(mean((ŷ − y)²)) / (max y − min y)`.
pub fn nrmse<T: Scalar>(estimates: &[T], targets: &[T]) -> Result<T> {
    if estimates.len() != targets.len() {
        return Err(Error::DimensionMismatch { expected: targets.len(), got: estimates.len() });
    }
    if targets.len() < 2 {
        return Err(Error::InvalidArgument("NRMSE needs at least two points".into()));
    }
    let (min, max) = targets.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    if !(max > min) {
        return Err(Error::DegenerateRange);
    }
    let mse = estimates.iter().zip(targets).map(|(&e, &y)| (e - y) * (e - y)).sum::<T>() / T::lit(targets.len() as f64);
    Ok(mse.sqrt() / (max - min))
}

/// Mean of `ŷ − y`; positive means the fit overestimates.
pub fn mean_bias<T: Scalar>(estimates: &[T], targets: &[T]) -> T {
    if targets.is_empty() {
        return T::zero();
    }
    estimates.iter().zip(targets).map(|(&e, &y)| e - y).sum::<T>() / T::lit(targets.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(sample_grid(2, (0.0, 1.0)).unwrap(), vec![0.0, 1.0]);
        assert_eq!(sample_grid(5, (0.0, 1.0)).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = sample_grid::<f64>(16, (0.0, 1.0)).unwrap();
        for w in g.windows(2) {
            assert!((w[1] - w[0] - 1.0 / 15.0).abs() < 1e-15);
        }
        assert!(sample_grid::<f64>(1, (0.0, 1.0)).is_err());
    }

    #[test]
    fn relu_endpoints() {
        let f = TargetFunction::<f64>::with_default_domain(TargetKind::Relu).unwrap();
        let y = target_values(&f, &[-1.0, 0.0, 0.5, 1.0]).unwrap();
        assert_eq!(y, vec![0.0, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn sigmoid_midpoint() {
        let f = TargetFunction::<f64>::with_default_domain(TargetKind::Sigmoid).unwrap();
        let s = |z: f64| 1.0 / (1.0 + (-z).exp());
        let expected = (s(0.0) - s(-5.0)) / (s(5.0) - s(-5.0));
        let y = target_values(&f, &[0.0]).unwrap();
        assert!((y[0] - expected).abs() < 1e-15);
        assert!((y[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sin_peak() {
        let f = TargetFunction::<f64>::with_default_domain(TargetKind::Sin).unwrap();
        let y = target_values(&f, &[0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        assert!(y[0].abs() < 1e-15);
        assert!((y[1] - 1.0).abs() < 1e-15);
        let wide = TargetFunction::<f64>::new(TargetKind::Sin, (0.0, 5.0)).unwrap();
        assert_eq!(wide.normalization, Normalization { min: -1.0, max: 1.0 });
    }

    #[test]
    fn elu_is_continuous_at_zero() {
        assert_eq!(TargetKind::Elu.eval(0.0f64), 0.0);
        assert!((TargetKind::Elu.eval(-1.0f64) - ((-1.0f64).exp() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn nrmse_cases() {
        let y: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        assert_eq!(nrmse(&y, &y).unwrap(), 0.0);
        let shifted: Vec<f64> = y.iter().map(|v| v + 0.1).collect();
        assert!((nrmse(&shifted, &y).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(nrmse(&[1.0, 1.0], &[0.5, 0.5]).unwrap_err(), Error::DegenerateRange);
        assert!(nrmse(&[1.0], &[0.5]).is_err());
        assert!(nrmse(&[1.0, 2.0], &[0.5]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in TargetKind::ALL {
            assert_eq!(k.name().parse::<TargetKind>().unwrap(), k);
        }
        assert!("tanh".parse::<TargetKind>().is_err());
    }

    #[test]
    fn outside_domain_rejected() {
        let f = TargetFunction::<f64>::with_default_domain(TargetKind::Relu).unwrap();
        assert!(target_values(&f, &[2.0]).is_err());
    }
}
