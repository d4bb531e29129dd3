//! The quasi-interpolant with random centers and its convolution oracle.
//!
//! Given centers `X_1..X_N` and samples `f(X_j)`, the quasi-interpolant is
//! the Shepard / Nadaraya–Watson ratio
//!
//! ```text
//! Q f(x) = Σ_j f(X_j) ψ_h(x - X_j) / Σ_l ψ_h(x - X_l)
//! ```
//!
//! and its deterministic counterpart replaces both sums by integrals
//! against the sampling law:
//!
//! ```text
//! f_min(x) = ∫ f(y) ψ_h(x - y) dμ(y) / ∫ ψ_h(x - t) dμ(t)
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridIndex;
use crate::kernels::{check_bandwidth, Kernel, KernelShape, GAUSSIAN_UNDERFLOW_EXPONENT};
use crate::points::{squared_distance, PointSet};
use crate::quadrature::{tensor_integrate, QuadratureEstimate, QuadratureSpec, MAX_TENSOR_DIM};
use crate::sampling::SamplingLaw;
use crate::targets::TargetFunction;

/// Result of evaluating the quasi-interpolant at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub value: f64,
    /// `r_h(x) = (1/N) Σ_l ψ_h(x - X_l)`.
    pub denominator: f64,
    /// Number of centers with nonzero weight.
    pub active_centers: usize,
}

#[derive(Debug, Clone)]
pub struct QuasiInterpolant {
    centers: PointSet,
    values: Vec<f64>,
    kernel: Kernel,
    h: f64,
    index: Option<GridIndex>,
}

/// Reusable buffers for a single evaluation.
#[derive(Debug, Default)]
pub struct Scratch {
    candidates: Vec<u32>,
    raw: Vec<f64>,
}

/// Unnormalized weights at one query, before division by their sum.
struct RawWeights {
    sum: f64,
    weighted_values: f64,
    /// Gaussian weights are stored as `exp(e_j - shift)`; 0 for the power kernel.
    shift: f64,
    active: usize,
    min_value: f64,
    max_value: f64,
}

impl QuasiInterpolant {
    /// Freezes centers, values, kernel and bandwidth into an evaluable object.
    ///
    /// A spatial index is built when the kernel has finite support and
    /// `3^d <= N`; above that the 3^d cell stencil costs more than the full sum.
    pub fn build(centers: PointSet, values: Vec<f64>, kernel: Kernel, h: f64) -> Result<Self> {
        let mut q = Self::build_naive(centers, values, kernel, h)?;
        let support = kernel.support_radius();
        let stencil = 3f64.powi(kernel.dim as i32);
        if support.is_finite() && stencil <= q.centers.len() as f64 {
            q.index = GridIndex::build(&q.centers, h * support);
        }
        Ok(q)
    }

    /// Same as [`build`](Self::build) but never builds a spatial index.
    pub fn build_naive(centers: PointSet, values: Vec<f64>, kernel: Kernel, h: f64) -> Result<Self> {
        check_bandwidth(h)?;
        if centers.is_empty() {
            return Err(Error::EmptyCenters);
        }
        if centers.len() != values.len() {
            return Err(Error::LengthMismatch {
                centers: centers.len(),
                values: values.len(),
            });
        }
        if centers.dim() != kernel.dim {
            return Err(Error::DimensionMismatch {
                expected: kernel.dim,
                got: centers.dim(),
            });
        }
        Ok(Self {
            centers,
            values,
            kernel,
            h,
            index: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn index(&self) -> Option<&GridIndex> {
        self.index.as_ref()
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.kernel.dim {
            return Err(Error::DimensionMismatch {
                expected: self.kernel.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Fills `scratch.candidates` with the centers that may carry weight.
    fn collect_candidates(&self, x: &[f64], scratch: &mut Scratch) {
        match &self.index {
            Some(grid) => grid.candidates(x, &mut scratch.candidates),
            None => {
                scratch.candidates.clear();
                scratch.candidates.extend(0..self.len() as u32);
            }
        }
    }

    /// Raw weight of each candidate into `scratch.raw` (same order).
    fn raw_weights(&self, x: &[f64], scratch: &mut Scratch) -> RawWeights {
        self.collect_candidates(x, scratch);
        let Scratch { candidates, raw } = scratch;
        raw.clear();
        let h = self.h;
        let shift = match self.kernel.shape {
            KernelShape::CompactPower { beta } => {
                let h2 = h * h;
                for &j in candidates.iter() {
                    let r2 = squared_distance(x, self.centers.point(j as usize));
                    let w = if r2 < h2 {
                        let t = 1.0 - r2.sqrt() / h;
                        if t > 0.0 {
                            t.powf(beta)
                        } else {
                            0.0
                        }
                    } else {
                        0.0
                    };
                    raw.push(w);
                }
                0.0
            }
            KernelShape::Gaussian { sigma } => {
                let scale = -1.0 / (2.0 * sigma * sigma * h * h);
                let mut max = f64::NEG_INFINITY;
                for &j in candidates.iter() {
                    let e = scale * squared_distance(x, self.centers.point(j as usize));
                    max = max.max(e);
                    raw.push(e);
                }
                for e in raw.iter_mut() {
                    let s = *e - max;
                    *e = if s < GAUSSIAN_UNDERFLOW_EXPONENT { 0.0 } else { s.exp() };
                }
                max
            }
        };

        let mut out = RawWeights {
            sum: 0.0,
            weighted_values: 0.0,
            shift,
            active: 0,
            min_value: f64::INFINITY,
            max_value: f64::NEG_INFINITY,
        };
        for (&j, &w) in candidates.iter().zip(raw.iter()) {
            if w > 0.0 {
                let v = self.values[j as usize];
                out.sum += w;
                out.weighted_values += w * v;
                out.active += 1;
                out.min_value = out.min_value.min(v);
                out.max_value = out.max_value.max(v);
            }
        }
        out
    }

    fn empty_neighborhood(&self, x: &[f64]) -> Error {
        let nearest = self
            .centers
            .iter()
            .map(|p| squared_distance(x, p))
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        Error::EmptyNeighborhood {
            nearest_distance: nearest,
        }
    }

    /// log of `(1/N) h^{-d} c_ψ`, the factor turning a raw weight sum into r_h.
    fn log_denominator_scale(&self) -> f64 {
        let d = self.kernel.dim as f64;
        let norm = match self.kernel.shape {
            KernelShape::Gaussian { sigma } => -0.5 * d * (2.0 * std::f64::consts::PI * sigma * sigma).ln(),
            KernelShape::CompactPower { .. } => 0.0,
        };
        self.kernel.amplitude.ln() + norm - d * self.h.ln() - (self.len() as f64).ln()
    }

    /// Normalized weights `ψ_h(x - X_j) / Σ_l ψ_h(x - X_l)` for every center.
    pub fn weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_query(x)?;
        let mut scratch = Scratch::default();
        let raw = self.raw_weights(x, &mut scratch);
        if raw.sum <= 0.0 {
            return Err(self.empty_neighborhood(x));
        }
        let mut w = vec![0.0; self.len()];
        for (&j, &r) in scratch.candidates.iter().zip(&scratch.raw) {
            w[j as usize] = r / raw.sum;
        }
        Ok(w)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<EvalReport> {
        self.evaluate_with(x, &mut Scratch::default())
    }

    /// [`evaluate`](Self::evaluate) reusing caller-owned buffers.
    pub fn evaluate_with(&self, x: &[f64], scratch: &mut Scratch) -> Result<EvalReport> {
        self.check_query(x)?;
        let raw = self.raw_weights(x, scratch);
        if raw.sum <= 0.0 {
            return Err(self.empty_neighborhood(x));
        }
        // convex combination; clamp rounding to the active value range
        let value = (raw.weighted_values / raw.sum).clamp(raw.min_value, raw.max_value);
        let denominator = (self.log_denominator_scale() + raw.shift + raw.sum.ln()).exp();
        Ok(EvalReport {
            value,
            denominator,
            active_centers: raw.active,
        })
    }

    /// Evaluates every point; failures stay in place without aborting the batch.
    /// Output is identical for any thread count.
    pub fn evaluate_batch(&self, xs: &PointSet) -> Vec<Result<EvalReport>> {
        (0..xs.len())
            .into_par_iter()
            .map_init(Scratch::default, |scratch, i| self.evaluate_with(xs.point(i), scratch))
            .collect()
    }
}

/// Quadrature approximation of `f_min(x)` for target `f` under `law` on the
/// target's domain. Numerator and denominator share one node set; the error
/// estimate compares against the rule with doubled panels.
pub fn convolution_oracle(
    f: TargetFunction,
    law: &SamplingLaw,
    kernel: &Kernel,
    h: f64,
    x: &[f64],
    quadrature: QuadratureSpec,
) -> Result<QuadratureEstimate> {
    check_bandwidth(h)?;
    let domain = f.domain();
    let d = domain.dim();
    if x.len() != d || kernel.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if x.len() != d { x.len() } else { kernel.dim },
        });
    }
    if d > MAX_TENSOR_DIM {
        return Err(Error::InvalidParameter(format!(
            "convolution oracle supports d <= {MAX_TENSOR_DIM}, got {d}"
        )));
    }
    let density = law.density_fn(&domain)?;
    let mut breaks = f.kinks();
    for (i, b) in breaks.iter_mut().enumerate() {
        b.push(x[i]);
        if kernel.shape.is_compact() {
            b.push(x[i] - h);
            b.push(x[i] + h);
        }
    }
    let hd = h.powi(-(d as i32));
    let integrand = |y: &[f64]| {
        let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        let w = hd * kernel.eval_squared_radius(r2 / (h * h)) * density(y);
        [f.eval_unchecked(y) * w, w]
    };
    let ratio = |spec: QuadratureSpec| -> Result<f64> {
        let [num, den] = tensor_integrate(domain.lower(), domain.upper(), spec, &breaks, integrand)
            .expect("dimension checked above");
        if !(den >= 1e-12) {
            return Err(Error::DegenerateMeasure { denominator: den });
        }
        Ok(num / den)
    };
    let coarse = ratio(quadrature)?;
    let fine = ratio(quadrature.refined())?;
    Ok(QuadratureEstimate {
        value: fine,
        error_estimate: (fine - coarse).abs(),
    })
}
