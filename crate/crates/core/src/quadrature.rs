//! Composite Gauss–Legendre quadrature on intervals and small boxes.
//!
//! Only used by the validation operations (kernel mass and the convolution
//! oracle), so tensor products are limited to three dimensions.

use serde::{Deserialize, Serialize};

/// Largest dimension accepted by the tensor-product rules.
pub const MAX_TENSOR_DIM: usize = 3;

/// Composite rule layout: `panels_per_axis` equal panels, each carrying a
/// `nodes_per_panel`-point Gauss–Legendre rule. Extra breakpoints supplied by
/// the caller split panels further.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    pub panels_per_axis: usize,
}

impl QuadratureSpec {
    pub fn new(nodes_per_panel: usize, panels_per_axis: usize) -> Self {
        assert!(nodes_per_panel >= 1 && panels_per_axis >= 1);
        Self {
            nodes_per_panel,
            panels_per_axis,
        }
    }

    /// The same rule with twice as many panels per axis.
    pub fn refined(&self) -> Self {
        Self {
            nodes_per_panel: self.nodes_per_panel,
            panels_per_axis: self.panels_per_axis * 2,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(64, 1)
    }
}

/// A quadrature value together with the difference against the refined rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the composite rule on `[lo, hi]`, with panels also
/// split at every breakpoint strictly inside the interval.
pub fn axis_rule(lo: f64, hi: f64, spec: QuadratureSpec, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(spec.nodes_per_panel);
    let panels = spec.panels_per_axis;
    let mut edges: Vec<f64> = (0..=panels)
        .map(|i| lo + (hi - lo) * i as f64 / panels as f64)
        .collect();
    edges[panels] = hi;
    edges.extend(breakpoints.iter().copied().filter(|b| *b > lo && *b < hi));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (hi - lo));

    let mut rule = Vec::with_capacity((edges.len() - 1) * gl.nodes().len());
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in gl.nodes().iter().zip(gl.weights()) {
            rule.push((mid + half * x, half * w));
        }
    }
    rule
}

/// Tensor-product rule over the box `[lower, upper]`, accumulating every
/// integrand in `f`'s output slice at once so several integrals share nodes.
///
/// Returns `None` when the dimension exceeds [`MAX_TENSOR_DIM`].
pub fn tensor_integrate<const K: usize>(
    lower: &[f64],
    upper: &[f64],
    spec: QuadratureSpec,
    breakpoints: &[Vec<f64>],
    mut f: impl FnMut(&[f64]) -> [f64; K],
) -> Option<[f64; K]> {
    let d = lower.len();
    if d == 0 || d > MAX_TENSOR_DIM || upper.len() != d {
        return None;
    }
    let rules: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|i| {
            let b = breakpoints.get(i).map(Vec::as_slice).unwrap_or(&[]);
            axis_rule(lower[i], upper[i], spec, b)
        })
        .collect();

    let mut acc = [0.0; K];
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    loop {
        let mut w = 1.0;
        for axis in 0..d {
            let (x, wx) = rules[axis][idx[axis]];
            point[axis] = x;
            w *= wx;
        }
        let vals = f(&point);
        for k in 0..K {
            acc[k] += w * vals[k];
        }
        // odometer increment
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] < rules[axis].len() {
                break;
            }
            idx[axis] = 0;
            axis += 1;
            if axis == d {
                return Some(acc);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let gl = GaussLegendre::new(8);
        for deg in 0..16 {
            let got: f64 = gl.nodes().iter().zip(gl.weights()).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - exact).abs() < 1e-13, "deg={deg}");
        }
    }

    #[test]
    fn breakpoints_resolve_kinks() {
        let rule = axis_rule(-1.0, 1.0, QuadratureSpec::new(4, 3), &[0.0]);
        let v: f64 = rule.iter().map(|(x, w)| w * x.abs()).sum();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_rule_rejects_high_dimension() {
        let lo = [0.0; 4];
        let hi = [1.0; 4];
        assert!(tensor_integrate(&lo, &hi, QuadratureSpec::new(2, 1), &[], |_| [1.0]).is_none());
    }

    #[test]
    fn tensor_rule_volume() {
        let v = tensor_integrate(
            &[0.0, -1.0, 2.0],
            &[1.0, 1.0, 5.0],
            QuadratureSpec::new(3, 2),
            &[],
            |p| [1.0, p[0] * p[1] * p[1]],
        )
        .unwrap();
        assert!((v[0] - 6.0).abs() < 1e-12);
        // ∫x dx · ∫y² dy · 3 = 0.5 · 2/3 · 3
        assert!((v[1] - 1.0).abs() < 1e-12);
    }
}
