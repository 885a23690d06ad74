//! Hybrid quantum spline fitting on a simulated statevector.
//!
//! A degree-`d` B-spline design matrix `S` is built for a target function,
//! `S|β⟩ = |Y⟩` is solved variationally (VQLS) on a dense simulator, and the
//! fitted curve is read back through quantum inner products of `|β′⟩` with
//! the rows of `S`.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which the tolerances quoted in
//! the docs assume.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` deliberately rejects NaN

pub mod bspline;
pub mod decomp;
pub mod error;
pub mod functions;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod readout;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod vqls;

pub use error::{Error, Result};
pub use functions::TargetKind;
pub use pipeline::{fit, FitConfig};
pub use scalar::Scalar;
pub use sim::Mode;

pub type State = sim::QuantumState<f64>;
pub type Circuit = sim::Circuit<f64>;
pub type Gate = sim::Gate<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type KnotVector = bspline::KnotVector<f64>;
pub type DesignMatrix = bspline::DesignMatrix<f64>;
pub type LcuDecomposition = decomp::LcuDecomposition<f64>;
pub type VqlsSolution = vqls::VqlsSolution<f64>;
pub type EstimateVector = readout::EstimateVector<f64>;
pub type FitReport = report::FitReport<f64>;
