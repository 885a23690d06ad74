//! Fit results, CSV output and replayable configuration text.

use std::fmt::Write as _;

use crate::error::Result;
use crate::functions::{nrmse, TargetKind};
use crate::rng::RNG_ALGORITHM;
use crate::scalar::Scalar;
use crate::sim::Mode;
use crate::vqls::{Entangler, OptimizerKind};

/// Header line of every fit CSV.
pub const CSV_HEADER: &str = "x,y_target,y_estimate";
/// Significant digits written per CSV value.
pub const CSV_DIGITS: usize = 12;

/// One sample: unit input, normalised target, estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitPoint<T> {
    pub x: T,
    pub y: T,
    pub y_hat: T,
}

/// Everything needed to rerun a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct RunInfo {
    pub mode: Mode,
    pub seed: u64,
    pub restarts: usize,
    pub layers: usize,
    pub entangler: Entangler,
    pub optimizer: OptimizerKind,
    pub max_iterations: usize,
    pub dilation: bool,
    pub classical_only: bool,
    pub rng: &'static str,
}

impl RunInfo {
    /// Run record of the classical solve, which has no variational settings.
    pub fn classical() -> Self {
        Self {
            mode: Mode::Exact,
            seed: 0,
            restarts: 0,
            layers: 0,
            entangler: Entangler::default(),
            optimizer: OptimizerKind::default(),
            max_iterations: 0,
            dilation: false,
            classical_only: true,
            rng: RNG_ALGORITHM,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<T> {
    pub function: TargetKind,
    pub knots: usize,
    pub degree: usize,
    /// Raw input window the unit inputs map onto.
    pub domain: (T, T),
    pub points: Vec<FitPoint<T>>,
    pub nrmse: T,
    /// NRMSE of the exact classical solve of the same system.
    pub classical_nrmse: T,
    pub final_cost: Option<T>,
    pub converged: bool,
    /// Mean of `ŷ − y`.
    pub mean_bias: T,
    pub run: RunInfo,
    pub wall_seconds: f64,
}

/// `v` rounded to [`CSV_DIGITS`] significant digits, printed in plain decimal.
pub fn format_value<T: Scalar>(v: T) -> String {
    let v = v.as_f64();
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{:.*e}", CSV_DIGITS - 1, v).parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

impl<T: Scalar> FitReport<T> {
    pub fn estimates(&self) -> Vec<T> {
        self.points.iter().map(|p| p.y_hat).collect()
    }

    pub fn targets(&self) -> Vec<T> {
        self.points.iter().map(|p| p.y).collect()
    }

    /// NRMSE recomputed from the stored points.
    pub fn recompute_nrmse(&self) -> Result<T> {
        nrmse(&self.estimates(), &self.targets())
    }

    /// `x,y_target,y_estimate` rows, one per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(40 * (self.points.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", format_value(p.x), format_value(p.y), format_value(p.y_hat));
        }
        out
    }

    /// Flat `key=value` configuration accepted by `--config`, followed by the
    /// results as `#` comments.
    pub fn to_config_text(&self) -> String {
        let r = &self.run;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("function", self.function.to_string());
        kv("knots", self.knots.to_string());
        kv("degree", self.degree.to_string());
        match r.mode {
            Mode::Exact => kv("mode", "exact".into()),
            Mode::Shots { shots, .. } => {
                kv("mode", "shots".into());
                kv("shots", shots.to_string());
            }
        }
        kv("seed", r.seed.to_string());
        kv("classical-only", r.classical_only.to_string());
        if !r.classical_only {
            kv("restarts", r.restarts.to_string());
            kv("layers", r.layers.to_string());
            kv("entangler", r.entangler.to_string());
            kv("optimizer", r.optimizer.to_string());
            kv("max-iterations", r.max_iterations.to_string());
            kv("dilation", r.dilation.to_string());
        }
        let _ = writeln!(out, "# rng: {}", r.rng);
        let _ = writeln!(out, "# domain: [{}, {}]", format_value(self.domain.0), format_value(self.domain.1));
        let _ = writeln!(out, "# nrmse: {}", format_value(self.nrmse));
        let _ = writeln!(out, "# classical_nrmse: {}", format_value(self.classical_nrmse));
        if let Some(c) = self.final_cost {
            let _ = writeln!(out, "# final_cost: {}", format_value(c));
        }
        let _ = writeln!(out, "# converged: {}", self.converged);
        let _ = writeln!(out, "# mean_bias: {}", format_value(self.mean_bias));
        let _ = writeln!(out, "# wall_seconds: {:.3}", self.wall_seconds);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.0f64), "0");
        assert_eq!(format_value(-0.0f64), "0");
        assert_eq!(format_value(1.0f64), "1");
        assert_eq!(format_value(0.1f64 + 0.2), "0.3");
        assert_eq!(format_value(1.0f64 / 3.0), "0.333333333333");
        assert_eq!(format_value(-2.0f64 / 3.0), "-0.666666666667");
        assert_eq!(format_value(1.5e-13f64), "0.00000000000015");
        assert_eq!(format_value(0.25f32), "0.25");
    }

    fn report() -> FitReport<f64> {
        FitReport {
            function: TargetKind::Sin,
            knots: 2,
            degree: 1,
            domain: (0.0, std::f64::consts::PI),
            points: vec![FitPoint { x: 0.0, y: 0.0, y_hat: 0.1 }, FitPoint { x: 1.0, y: 1.0, y_hat: 0.9 }],
            nrmse: 0.1,
            classical_nrmse: 0.0,
            final_cost: Some(1e-9),
            converged: true,
            mean_bias: 0.0,
            run: RunInfo::classical(),
            wall_seconds: 0.0,
        }
    }

    #[test]
    fn csv_layout() {
        let csv = report().to_csv();
        assert_eq!(csv, "x,y_target,y_estimate\n0,0,0.1\n1,1,0.9\n");
    }

    #[test]
    fn nrmse_is_recomputable() {
        let r = report();
        assert!((r.recompute_nrmse().unwrap() - r.nrmse).abs() < 1e-12);
    }

    #[test]
    fn config_text_has_keys_and_comments() {
        let text = report().to_config_text();
        assert!(text.starts_with("function=sin\nknots=2\ndegree=1\nmode=exact\n"));
        assert!(text.contains("# nrmse: 0.1\n"));
        assert!(text.contains("# rng: ChaCha20"));
    }
}
