//! Stochastic quasi-interpolation with random sampling centers.
//!
//! Given `N` centers drawn i.i.d. from a law μ on a box Ω and the samples
//! `f(X_j)`, the quasi-interpolant
//!
//! ```text
//! Q f(x) = Σ_j f(X_j) ψ_h(x - X_j) / Σ_l ψ_h(x - X_l),    ψ_h(x) = h^{-d} ψ(x / h)
//! ```
//!
//! approximates `f` without solving any linear system. The crate provides
//!
//! - [`kernels`]: Gaussian and compactly supported power kernels;
//! - [`sampling`]: seeded, reproducible center generation on boxes;
//! - [`targets`]: the benchmark functions in d = 1, 3 and 11;
//! - [`quasi`]: the interpolant itself (with a uniform-grid index for
//!   compact kernels) and the deterministic convolution limit `f_min`;
//! - [`experiments`]: the Monte Carlo harness for empirical errors,
//!   convergence-order fits and exceedance probabilities;
//! - [`config`] and [`report`]: configuration files, CSV and run manifests.
//!
//! ```
//! use stoqi::{Kernel, PointSet, QuasiInterpolant};
//!
//! let centers = PointSet::new(1, vec![-0.5, 0.0, 0.5]).unwrap();
//! let values = vec![0.5, 0.0, 0.5];
//! let q = QuasiInterpolant::build(centers, values, Kernel::compact(3.0, 1).unwrap(), 0.6).unwrap();
//! let r = q.evaluate(&[0.25]).unwrap();
//! assert!(r.value > 0.0 && r.value < 0.5);
//! ```

// NaN must fail these comparisons, hence `!(a < b)` over `a >= b`.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod kernels;
pub mod points;
pub mod quadrature;
pub mod quasi;
pub mod report;
pub mod sampling;
pub mod selftest;
pub mod targets;

pub use error::{Error, Result};
pub use experiments::{
    a_priori_order, bandwidth, fit_loglinear, run_emae, run_probability, run_table1, ErrorRecord, ExperimentConfig,
    FitResult, Metric, Preset, ProbabilityRow, Table1Plan,
};
pub use kernels::{Kernel, KernelShape};
pub use points::PointSet;
pub use quadrature::{QuadratureEstimate, QuadratureSpec};
pub use quasi::{convolution_oracle, EvalReport, QuasiInterpolant};
pub use sampling::{derive_replication_seed, sample_centers, BoxDomain, SamplingLaw};
pub use targets::TargetFunction;
