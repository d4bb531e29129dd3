//! Sampling centers on a box from a seeded, reproducible stream.
//!
//! The base generator is SplitMix64 (Steele, Lea & Flood 2014), chosen because
//! its recurrence is three lines of integer arithmetic and can be reproduced
//! bit-exactly in any language:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15            (mod 2^64)
//! z      <- state
//! z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
//! output <- z ^ (z >> 31)
//! ```
//!
//! Uniform doubles take the top 53 bits: `(output >> 11) * 2^-53`.
//! Standard normals use the Box–Muller transform on two consecutive uniforms
//! `u1, u2`: `r = sqrt(-2 ln(1 - u1))`, emitting `r cos(2π u2)` and then
//! `r sin(2π u2)` on the next call.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::split_call;
use crate::points::PointSet;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Rejection sampling refuses laws whose acceptance probability on the box
/// is below this.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

/// Upper bound on rejection draws for a single point.
const REJECTION_BUDGET: u64 = 100_000_000;

/// The SplitMix64 output function (a bijection on u64).
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `index` of an experiment seeded with `base`:
/// `mix64(base ^ index * 0x9E3779B97F4A7C15)`.
///
/// Multiplication by the odd gamma, xor with a fixed base and `mix64` are
/// all bijections, so the map is injective in `index`.
pub fn derive_replication_seed(base_seed: u64, replication_index: u64) -> u64 {
    mix64(base_seed ^ replication_index.wrapping_mul(GOLDEN_GAMMA))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform on [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Axis-aligned box `[lower, upper]` in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(format!(
                "box bounds must be nonempty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) =
            (0..lower.len()).find(|&i| !(lower[i] < upper[i]) || !lower[i].is_finite() || !upper[i].is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "box axis {i} needs finite lower < upper, got [{}, {}]",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^d`.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| b - a).collect()
    }

    pub fn volume(&self) -> f64 {
        self.widths().iter().product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }
}

/// Law of the sampling centers.
///
/// For the truncated normal, `mean = None` means the box center and
/// `stddev = None` means a quarter of each axis width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingLaw {
    Uniform,
    TruncatedNormal {
        mean: Option<Vec<f64>>,
        stddev: Option<f64>,
    },
}

impl Default for SamplingLaw {
    fn default() -> Self {
        SamplingLaw::TruncatedNormal {
            mean: None,
            stddev: None,
        }
    }
}

impl fmt::Display for SamplingLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingLaw::Uniform => write!(f, "uniform"),
            SamplingLaw::TruncatedNormal { mean, stddev } => {
                write!(f, "truncnormal(mean=")?;
                match mean {
                    None => write!(f, "auto")?,
                    Some(m) => {
                        let parts: Vec<String> = m.iter().map(|v| format!("{v:?}")).collect();
                        write!(f, "{}", parts.join(":"))?
                    }
                }
                match stddev {
                    None => write!(f, ",stddev=auto)"),
                    Some(s) => write!(f, ",stddev={s:?})"),
                }
            }
        }
    }
}

impl FromStr for SamplingLaw {
    type Err = Error;

    /// Parses `uniform` or `truncnormal(mean=auto,stddev=auto)`. A numeric
    /// mean is either one value broadcast to every axis or a `:`-separated
    /// list with one value per axis.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("malformed sampling law `{s}`"));
        let (name, args) = split_call(s).ok_or_else(bad)?;
        match name {
            "uniform" if args.is_empty() => Ok(SamplingLaw::Uniform),
            "truncnormal" => {
                let mut mean = None;
                let mut stddev = None;
                for arg in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                    let (k, v) = arg.split_once('=').ok_or_else(bad)?;
                    let v = v.trim();
                    match k.trim() {
                        "mean" if v == "auto" => mean = None,
                        "mean" => {
                            let m: std::result::Result<Vec<f64>, _> = v.split(':').map(|p| p.trim().parse()).collect();
                            mean = Some(m.map_err(|_| bad())?);
                        }
                        "stddev" if v == "auto" => stddev = None,
                        "stddev" => {
                            let sd: f64 = v.parse().map_err(|_| bad())?;
                            if !(sd.is_finite() && sd > 0.0) {
                                return Err(Error::InvalidParameter(format!("stddev must be positive, got {sd}")));
                            }
                            stddev = Some(sd);
                        }
                        other => {
                            return Err(Error::InvalidParameter(format!(
                                "unknown truncnormal argument `{other}`"
                            )))
                        }
                    }
                }
                Ok(SamplingLaw::TruncatedNormal { mean, stddev })
            }
            _ => Err(bad()),
        }
    }
}

/// Density of a sampling law on its box.
pub type DensityFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A truncated normal with every parameter resolved against its box.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTruncatedNormal {
    pub mean: Vec<f64>,
    pub stddev: Vec<f64>,
    /// Probability that an unconstrained draw lands in the box.
    pub acceptance: f64,
}

impl ResolvedTruncatedNormal {
    /// Density of the truncated law at `x` (zero outside the box).
    pub fn density(&self, domain: &BoxDomain, x: &[f64]) -> f64 {
        if !domain.contains(x) {
            return 0.0;
        }
        let mut p = 1.0 / self.acceptance;
        for ((xi, m), s) in x.iter().zip(&self.mean).zip(&self.stddev) {
            let z = (xi - m) / s;
            p *= (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt());
        }
        p
    }
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

impl SamplingLaw {
    /// Fills in defaults for `domain` and checks the rejection rate.
    pub fn resolve_truncated_normal(
        mean: Option<&[f64]>,
        stddev: Option<f64>,
        domain: &BoxDomain,
    ) -> Result<ResolvedTruncatedNormal> {
        let d = domain.dim();
        let mean = match mean {
            None => domain.center(),
            Some(m) if m.len() == 1 => vec![m[0]; d],
            Some(m) if m.len() == d => m.to_vec(),
            Some(m) => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.len(),
                })
            }
        };
        if !domain.contains(&mean) {
            return Err(Error::InvalidParameter(format!(
                "truncated-normal mean {mean:?} lies outside the domain"
            )));
        }
        let stddev = match stddev {
            None => domain.widths().iter().map(|w| w / 4.0).collect(),
            Some(s) => vec![s; d],
        };
        let acceptance = (0..d)
            .map(|i| {
                let a = (domain.lower()[i] - mean[i]) / stddev[i];
                let b = (domain.upper()[i] - mean[i]) / stddev[i];
                std_normal_cdf(b) - std_normal_cdf(a)
            })
            .product::<f64>();
        if acceptance < MIN_ACCEPTANCE {
            return Err(Error::PathologicalLaw { acceptance });
        }
        Ok(ResolvedTruncatedNormal {
            mean,
            stddev,
            acceptance,
        })
    }

    /// Density of the law on `domain`, used by quadrature oracles.
    pub fn density_fn(&self, domain: &BoxDomain) -> Result<DensityFn> {
        match self {
            SamplingLaw::Uniform => {
                let dom = domain.clone();
                let v = 1.0 / domain.volume();
                Ok(Box::new(move |x| if dom.contains(x) { v } else { 0.0 }))
            }
            SamplingLaw::TruncatedNormal { mean, stddev } => {
                let r = Self::resolve_truncated_normal(mean.as_deref(), *stddev, domain)?;
                let dom = domain.clone();
                Ok(Box::new(move |x| r.density(&dom, x)))
            }
        }
    }
}

/// Draws `n` i.i.d. points from `law` restricted to `domain`.
///
/// The truncated normal rejects whole d-vectors with any coordinate outside
/// the box. Identical arguments give bit-identical output.
pub fn sample_centers(law: &SamplingLaw, domain: &BoxDomain, n: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of centers must be >= 1".into()));
    }
    let d = domain.dim();
    let mut rng = SplitMix64::new(seed);
    let mut coords = Vec::with_capacity(n * d);
    match law {
        SamplingLaw::Uniform => {
            for _ in 0..n {
                for i in 0..d {
                    let (a, b) = (domain.lower()[i], domain.upper()[i]);
                    coords.push((a + (b - a) * rng.next_f64()).min(b));
                }
            }
        }
        SamplingLaw::TruncatedNormal { mean, stddev } => {
            let law = SamplingLaw::resolve_truncated_normal(mean.as_deref(), *stddev, domain)?;
            let mut draw = vec![0.0; d];
            for _ in 0..n {
                let mut attempts = 0u64;
                loop {
                    for i in 0..d {
                        draw[i] = law.mean[i] + law.stddev[i] * rng.next_normal();
                    }
                    if domain.contains(&draw) {
                        break;
                    }
                    attempts += 1;
                    if attempts >= REJECTION_BUDGET {
                        return Err(Error::PathologicalLaw {
                            acceptance: 1.0 / attempts as f64,
                        });
                    }
                }
                coords.extend_from_slice(&draw);
            }
        }
    }
    PointSet::new(d, coords)
}
