//! Radial kernels and their bandwidth scalings.
//!
//! Two families are provided: the normalized Gaussian
//! `(2πσ²)^{-d/2} exp(-‖x‖²/2σ²)` and the compactly supported power kernel
//! `max(1 - ‖x‖, 0)^β`. The power kernel is deliberately left unnormalized;
//! the quasi-interpolant is a ratio of kernel sums, so any positive constant
//! factor cancels. [`Kernel::mass`] reports the actual integral.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{tensor_integrate, QuadratureEstimate, QuadratureSpec};

/// `exp` underflows to zero below this argument in double precision.
/// Gaussian weights whose shifted exponent falls under it are treated as zero.
pub const GAUSSIAN_UNDERFLOW_EXPONENT: f64 = -745.0;

/// Half-width, in units of σ, of the box used to integrate the Gaussian.
const GAUSSIAN_MASS_TRUNCATION: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelShape {
    Gaussian { sigma: f64 },
    CompactPower { beta: f64 },
}

impl KernelShape {
    fn validate(&self) -> Result<()> {
        match *self {
            KernelShape::Gaussian { sigma } if !(sigma.is_finite() && sigma > 0.0) => Err(Error::InvalidParameter(
                format!("gaussian sigma must be positive, got {sigma}"),
            )),
            KernelShape::CompactPower { beta } if !(beta.is_finite() && beta > 0.0) => Err(Error::InvalidParameter(
                format!("compact beta must be positive, got {beta}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, KernelShape::CompactPower { .. })
    }

    /// Short family name used in reports (`gaussian` / `compact`).
    pub fn family_name(&self) -> &'static str {
        match self {
            KernelShape::Gaussian { .. } => "gaussian",
            KernelShape::CompactPower { .. } => "compact",
        }
    }
}

impl fmt::Display for KernelShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelShape::Gaussian { sigma } => write!(f, "gaussian(sigma={sigma:?})"),
            KernelShape::CompactPower { beta } => write!(f, "compact(beta={beta:?})"),
        }
    }
}

impl FromStr for KernelShape {
    type Err = Error;

    /// Parses `gaussian(sigma=1.0)` or `compact(beta=3.0)`. A bare family
    /// name takes σ = 1 or β = 3.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) =
            split_call(s).ok_or_else(|| Error::InvalidParameter(format!("malformed kernel spec `{s}`")))?;
        let shape = match name {
            "gaussian" => KernelShape::Gaussian {
                sigma: single_arg(args, "sigma", 1.0)?,
            },
            "compact" => KernelShape::CompactPower {
                beta: single_arg(args, "beta", 3.0)?,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown kernel `{other}` (expected gaussian or compact)"
                )))
            }
        };
        shape.validate()?;
        Ok(shape)
    }
}

/// Splits `name(args)` into its parts; a bare `name` has empty args.
pub(crate) fn split_call(s: &str) -> Option<(&str, &str)> {
    match s.find('(') {
        None => Some((s, "")),
        Some(open) => {
            let rest = s[open + 1..].strip_suffix(')')?;
            Some((s[..open].trim(), rest.trim()))
        }
    }
}

fn single_arg(args: &str, key: &str, default: f64) -> Result<f64> {
    if args.is_empty() {
        return Ok(default);
    }
    let (k, v) = args
        .split_once('=')
        .ok_or_else(|| Error::InvalidParameter(format!("expected `{key}=<value>`, got `{args}`")))?;
    if k.trim() != key {
        return Err(Error::InvalidParameter(format!(
            "unknown kernel argument `{}` (expected `{key}`)",
            k.trim()
        )));
    }
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("`{key}` is not a number: `{}`", v.trim())))
}

/// A radial kernel in a fixed dimension.
///
/// `amplitude` multiplies the kernel; it is 1 for the standard families and
/// exists so the scale invariance of the quasi-interpolant can be exercised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub shape: KernelShape,
    pub dim: usize,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Kernel {
    pub fn new(shape: KernelShape, dim: usize) -> Result<Self> {
        shape.validate()?;
        if dim == 0 {
            return Err(Error::InvalidParameter("kernel dimension must be >= 1".into()));
        }
        Ok(Self {
            shape,
            dim,
            amplitude: 1.0,
        })
    }

    pub fn gaussian(sigma: f64, dim: usize) -> Result<Self> {
        Self::new(KernelShape::Gaussian { sigma }, dim)
    }

    pub fn compact(beta: f64, dim: usize) -> Result<Self> {
        Self::new(KernelShape::CompactPower { beta }, dim)
    }

    /// Returns `c·ψ`.
    pub fn with_amplitude(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kernel amplitude must be positive, got {c}"
            )));
        }
        self.amplitude = c;
        Ok(self)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// ψ(x).
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Ok(self.eval_squared_radius(r2))
    }

    /// ψ as a function of ‖x‖².
    pub fn eval_squared_radius(&self, r2: f64) -> f64 {
        let base = match self.shape {
            KernelShape::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                (2.0 * PI * s2).powf(-(self.dim as f64) / 2.0) * (-r2 / (2.0 * s2)).exp()
            }
            KernelShape::CompactPower { beta } => {
                let t = 1.0 - r2.sqrt();
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf(beta)
                }
            }
        };
        self.amplitude * base
    }

    /// ψ_h(diff) = h^{-d} ψ(diff / h).
    pub fn eval_scaled(&self, h: f64, diff: &[f64]) -> Result<f64> {
        check_bandwidth(h)?;
        self.check_dim(diff)?;
        let scaled: Vec<f64> = diff.iter().map(|v| v / h).collect();
        Ok(h.powi(-(self.dim as i32)) * self.eval(&scaled)?)
    }

    /// Radius of the support of ψ: 1 for the power kernel, infinite for the Gaussian.
    pub fn support_radius(&self) -> f64 {
        match self.shape {
            KernelShape::Gaussian { .. } => f64::INFINITY,
            KernelShape::CompactPower { .. } => 1.0,
        }
    }

    /// Numerical ∫ψ over R^d by a tensor Gauss–Legendre rule, truncated to the
    /// support (power kernel) or to ±8σ (Gaussian). The reported error is the
    /// difference against the rule with doubled panels.
    ///
    /// Returns `None` when `dim` is too large for a tensor rule; this is a
    /// skipped validation, not a failure.
    pub fn mass(&self, spec: QuadratureSpec) -> Option<QuadratureEstimate> {
        let half = match self.shape {
            KernelShape::Gaussian { sigma } => GAUSSIAN_MASS_TRUNCATION * sigma,
            KernelShape::CompactPower { .. } => 1.0,
        };
        let lower = vec![-half; self.dim];
        let upper = vec![half; self.dim];
        let breaks = vec![vec![0.0]; self.dim];
        let integrand = |p: &[f64]| [self.eval_squared_radius(p.iter().map(|v| v * v).sum())];
        let coarse = tensor_integrate(&lower, &upper, spec, &breaks, integrand)?[0];
        let fine = tensor_integrate(&lower, &upper, spec.refined(), &breaks, integrand)?[0];
        if coarse.is_nan() || fine.is_nan() {
            return None;
        }
        Some(QuadratureEstimate {
            value: fine,
            error_estimate: (fine - coarse).abs(),
        })
    }
}

pub(crate) fn check_bandwidth(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidBandwidth(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

    #[test]
    fn gaussian_at_origin() {
        let k = Kernel::gaussian(1.0, 1).unwrap();
        assert!((k.eval(&[0.0]).unwrap() - INV_SQRT_2PI).abs() < 1e-15);
        assert!((k.eval_scaled(1.0, &[0.0]).unwrap() - INV_SQRT_2PI).abs() < 1e-15);
    }

    #[test]
    fn compact_values() {
        let k2 = Kernel::compact(3.0, 2).unwrap();
        assert_eq!(k2.eval(&[0.0, 0.0]).unwrap(), 1.0);
        let k1 = Kernel::compact(3.0, 1).unwrap();
        assert_eq!(k1.eval(&[1.5]).unwrap(), 0.0);
        assert_eq!(k1.eval(&[1.0]).unwrap(), 0.0);
        assert_eq!(k1.eval(&[-1.0]).unwrap(), 0.0);
        assert!((k1.eval_scaled(0.5, &[0.25]).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(k1.eval_scaled(0.1, &[0.1]).unwrap(), 0.0);
        assert_eq!(k2.eval_scaled(0.1, &[0.08, 0.08]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let k = Kernel::gaussian(1.0, 2).unwrap();
        assert!(matches!(
            k.eval(&[0.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn nonpositive_bandwidth_is_an_error() {
        let k = Kernel::compact(3.0, 1).unwrap();
        assert!(matches!(k.eval_scaled(0.0, &[0.0]), Err(Error::InvalidBandwidth(_))));
        assert!(matches!(k.eval_scaled(-1.0, &[0.0]), Err(Error::InvalidBandwidth(_))));
        assert!(matches!(
            k.eval_scaled(f64::NAN, &[0.0]),
            Err(Error::InvalidBandwidth(_))
        ));
    }

    #[test]
    fn support_radius() {
        assert_eq!(Kernel::compact(3.0, 1).unwrap().support_radius(), 1.0);
        assert_eq!(Kernel::compact(7.0, 4).unwrap().support_radius(), 1.0);
        assert!(Kernel::gaussian(1.0, 1).unwrap().support_radius().is_infinite());
    }

    #[test]
    fn masses() {
        let spec = QuadratureSpec::default();
        let g = Kernel::gaussian(1.0, 1).unwrap().mass(spec).unwrap();
        assert!((g.value - 1.0).abs() < 1e-8, "{g:?}");
        let c = Kernel::compact(3.0, 1).unwrap().mass(spec).unwrap();
        assert!((c.value - 0.5).abs() < 1e-10, "{c:?}");
        assert!(Kernel::compact(3.0, 4).unwrap().mass(spec).is_none());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["gaussian(sigma=1.0)", "compact(beta=3.0)", "gaussian(sigma=0.25)"] {
            let k: KernelShape = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!(
            "gaussian".parse::<KernelShape>().unwrap(),
            KernelShape::Gaussian { sigma: 1.0 }
        );
        assert_eq!(
            "compact".parse::<KernelShape>().unwrap(),
            KernelShape::CompactPower { beta: 3.0 }
        );
        assert!("compact(sigma=1)".parse::<KernelShape>().is_err());
        assert!("gaussian(sigma=-1)".parse::<KernelShape>().is_err());
        assert!("cauchy".parse::<KernelShape>().is_err());
    }

    #[test]
    fn positive_on_unit_ball() {
        for k in [Kernel::gaussian(1.0, 1).unwrap(), Kernel::compact(3.0, 1).unwrap()] {
            let min = (0..=1000)
                .map(|i| k.eval(&[i as f64 / 1000.0 * 0.999_999]).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(min > 0.0);
        }
    }
}
