//! Benchmark target functions.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::BoxDomain;

/// Lipschitz constant of `sin(2πx₁)cos(2πx₂)sin(2πx₃)`: ‖∇f‖²/(2π)² is
/// multilinear in the squared sines, so its maximum (1) sits at a vertex.
pub const TRIG3_LIPSCHITZ: f64 = 2.0 * PI;

/// Bound on ‖∇G‖ for the first ten factors `G = ∏_{j≤10} g_j` of the 11-D
/// target, from `sqrt(Σ_j max|g_j'|²)` on a 2·10⁶-point grid (4.8899),
/// rounded up.
pub const SINE11_SMOOTH_LIPSCHITZ: f64 = 4.9;

/// Hölder exponent of the last factor `cos(πx₁₁/2)^{5/11}` at `x₁₁ = 1`.
pub const SINE11_TAIL_EXPONENT: f64 = 5.0 / 11.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetFunction {
    /// `|x|` on [-1, 1].
    AbsX,
    /// `sin(2πx₁)cos(2πx₂)sin(2πx₃)` on [0, 1]³.
    TrigProduct3D,
    /// `∏_{j=1}^{11} sin(π/2 (x_j + j/11))^{5/j}` on [0, 1]¹¹.
    SineProduct11D,
    /// The constant 1 on [0, 1].
    ConstantOne,
}

impl TargetFunction {
    pub const ALL: [TargetFunction; 4] = [
        TargetFunction::AbsX,
        TargetFunction::TrigProduct3D,
        TargetFunction::SineProduct11D,
        TargetFunction::ConstantOne,
    ];

    /// The benchmark target used for dimension `d` (1, 3 or 11).
    pub fn for_dimension(d: usize) -> Option<Self> {
        match d {
            1 => Some(TargetFunction::AbsX),
            3 => Some(TargetFunction::TrigProduct3D),
            11 => Some(TargetFunction::SineProduct11D),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TargetFunction::AbsX => "absx",
            TargetFunction::TrigProduct3D => "trig3",
            TargetFunction::SineProduct11D => "sine11",
            TargetFunction::ConstantOne => "one",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TargetFunction::AbsX | TargetFunction::ConstantOne => 1,
            TargetFunction::TrigProduct3D => 3,
            TargetFunction::SineProduct11D => 11,
        }
    }

    pub fn domain(&self) -> BoxDomain {
        let (lo, hi) = match self {
            TargetFunction::AbsX => (-1.0, 1.0),
            _ => (0.0, 1.0),
        };
        BoxDomain::cube(lo, hi, self.dim()).expect("static domain")
    }

    /// Smoothness exponent used for the a-priori rate. All three benchmark
    /// targets are treated as s = 1.
    pub fn holder_s(&self) -> f64 {
        1.0
    }

    /// Points per axis where the function has a kink, for quadrature.
    pub fn kinks(&self) -> Vec<Vec<f64>> {
        match self {
            TargetFunction::AbsX => vec![vec![0.0]],
            _ => vec![Vec::new(); self.dim()],
        }
    }

    /// f(x), or a domain error when `x` lies outside the box.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !self.domain().contains(x) {
            return Err(Error::OutOfDomain { point: x.to_vec() });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            TargetFunction::AbsX => x[0].abs(),
            TargetFunction::TrigProduct3D => {
                (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos() * (2.0 * PI * x[2]).sin()
            }
            TargetFunction::SineProduct11D => x
                .iter()
                .enumerate()
                .map(|(i, xj)| {
                    let j = (i + 1) as f64;
                    // base is in [0, 1] on the domain; clamp rounding below 0
                    let base = (FRAC_PI_2 * (xj + j / 11.0)).sin().max(0.0);
                    base.powf(5.0 / j)
                })
                .product(),
            TargetFunction::ConstantOne => 1.0,
        }
    }

    /// Upper bound on the modulus of continuity ω_f(h).
    ///
    /// `h` for the Lipschitz targets; the 11-D target adds the Hölder-5/11
    /// contribution of its last factor, `(πh/2)^{5/11}`.
    pub fn modulus_bound(&self, h: f64) -> f64 {
        match self {
            TargetFunction::AbsX => h,
            TargetFunction::TrigProduct3D => TRIG3_LIPSCHITZ * h,
            TargetFunction::SineProduct11D => {
                SINE11_SMOOTH_LIPSCHITZ * h + (FRAC_PI_2 * h).min(FRAC_PI_2).powf(SINE11_TAIL_EXPONENT)
            }
            TargetFunction::ConstantOne => 0.0,
        }
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TargetFunction::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| {
                Error::InvalidParameter(format!("unknown target `{s}` (expected absx, trig3, sine11 or one)"))
            })
    }
}
