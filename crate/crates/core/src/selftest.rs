//! Fast invariant checks run by `stoqi selftest`.

use crate::experiments::{a_priori_order, fit_loglinear_points, PRegime};
use crate::kernels::Kernel;
use crate::points::PointSet;
use crate::quadrature::QuadratureSpec;
use crate::quasi::QuasiInterpolant;
use crate::sampling::{sample_centers, BoxDomain, SamplingLaw, SplitMix64};
use crate::targets::TargetFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst <= tol,
        detail: format!("worst {worst:.3e} (tolerance {tol:.0e})"),
    }
}

struct Instance {
    q: QuasiInterpolant,
    queries: PointSet,
}

fn instances() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seed = 11u64;
    for d in [1usize, 2, 3] {
        for kernel in [Kernel::gaussian(1.0, d).unwrap(), Kernel::compact(3.0, d).unwrap()] {
            seed += 1;
            let dom = BoxDomain::cube(0.0, 1.0, d).unwrap();
            let centers = sample_centers(&SamplingLaw::default(), &dom, 400, seed).unwrap();
            let mut rng = SplitMix64::new(seed ^ 0xABCD);
            let values: Vec<f64> = (0..centers.len()).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
            let h = if kernel.shape.is_compact() { 0.45 } else { 0.1 };
            let queries = sample_centers(&SamplingLaw::Uniform, &dom, 50, seed + 100).unwrap();
            out.push(Instance {
                q: QuasiInterpolant::build(centers, values, kernel, h).unwrap(),
                queries,
            });
        }
    }
    out
}

/// Runs every check; never panics on a failed invariant.
pub fn run() -> Vec<Check> {
    let insts = instances();
    let mut checks = Vec::new();

    let mut pu: f64 = 0.0;
    let mut range: f64 = 0.0;
    let mut consts: f64 = 0.0;
    let mut pruned: f64 = 0.0;
    for inst in &insts {
        let q = &inst.q;
        let ones =
            QuasiInterpolant::build(q.centers().clone(), vec![1.0; q.len()], *q.kernel(), q.bandwidth()).unwrap();
        let naive =
            QuasiInterpolant::build_naive(q.centers().clone(), values_of(q), *q.kernel(), q.bandwidth()).unwrap();
        for x in inst.queries.iter() {
            let Ok(w) = q.weights(x) else { continue };
            pu = pu.max((w.iter().sum::<f64>() - 1.0).abs());
            let r = q.evaluate(x).unwrap();
            let (lo, hi) = active_range(q, &w);
            range = range.max((lo - r.value).max(r.value - hi).max(0.0));
            consts = consts.max((ones.evaluate(x).unwrap().value - 1.0).abs());
            let n = naive.evaluate(x).unwrap();
            pruned = pruned.max(rel(r.value, n.value)).max(rel(r.denominator, n.denominator));
        }
    }
    checks.push(check("partition of unity", pu, 1e-12));
    checks.push(check("constant reproduction", consts, 1e-12));
    checks.push(check("range bound", range, 0.0));
    checks.push(check("pruned vs naive", pruned, 1e-10));

    let mut scale: f64 = 0.0;
    let mut shift: f64 = 0.0;
    for inst in &insts {
        let q = &inst.q;
        let scaled = QuasiInterpolant::build(
            q.centers().clone(),
            values_of(q),
            q.kernel().with_amplitude(7.25).unwrap(),
            q.bandwidth(),
        )
        .unwrap();
        let offset = 3.5;
        let mut moved = q.centers().clone();
        moved.map_rows(|r| r.iter_mut().for_each(|v| *v += offset));
        let moved = QuasiInterpolant::build(moved, values_of(q), *q.kernel(), q.bandwidth()).unwrap();
        for x in inst.queries.iter() {
            let Ok(a) = q.evaluate(x) else { continue };
            let b = scaled.evaluate(x).unwrap();
            scale = scale.max(rel(a.value, b.value));
            let xs: Vec<f64> = x.iter().map(|v| v + offset).collect();
            let c = moved.evaluate(&xs).unwrap();
            shift = shift.max((a.value - c.value).abs());
        }
    }
    checks.push(check("kernel-scale invariance", scale, 1e-14));
    checks.push(check("translation equivariance", shift, 1e-12));

    let dom = BoxDomain::cube(-1.0, 1.0, 3).unwrap();
    let a = sample_centers(&SamplingLaw::default(), &dom, 1000, 5).unwrap();
    let b = sample_centers(&SamplingLaw::default(), &dom, 1000, 5).unwrap();
    checks.push(Check {
        name: "sampling containment and determinism",
        passed: a == b && a.iter().all(|p| dom.contains(p)),
        detail: "1000 truncated-normal points in [-1,1]^3".into(),
    });

    let spec = QuadratureSpec::default();
    let g = Kernel::gaussian(1.0, 1)
        .unwrap()
        .mass(spec)
        .map_or(f64::INFINITY, |m| (m.value - 1.0).abs());
    checks.push(check("gaussian mass", g, 1e-6));
    let c = Kernel::compact(3.0, 1)
        .unwrap()
        .mass(spec)
        .map_or(f64::INFINITY, |m| (m.value - 0.5).abs());
    checks.push(check("compact mass (d=1, beta=3)", c, 1e-10));

    let pts: Vec<(f64, f64)> = (6..12).map(|j| (2f64.powi(j), 2.0 * 2f64.powi(j).powf(-0.5))).collect();
    let fit =
        fit_loglinear_points(&pts).map_or(f64::INFINITY, |f| (f.delta_hat - 0.5).abs().max((f.k_hat - 2.0).abs()));
    checks.push(check("log-linear exact line", fit, 1e-12));

    let orders = [(1, 1.0 / 3.0), (3, 0.2), (11, 1.0 / 13.0)];
    let worst = orders
        .iter()
        .map(|(d, v)| (a_priori_order(1.0, *d, PRegime::LeTwo).order - v).abs())
        .fold(0.0, f64::max);
    checks.push(check("a-priori orders", worst, 1e-15));

    let one = TargetFunction::ConstantOne;
    checks.push(Check {
        name: "constant target",
        passed: (0..=10).all(|i| one.eval(&[i as f64 / 10.0]).unwrap() == 1.0),
        detail: "f = 1 on [0, 1]".into(),
    });
    checks
}

fn values_of(q: &QuasiInterpolant) -> Vec<f64> {
    q.values().to_vec()
}

fn active_range(q: &QuasiInterpolant, w: &[f64]) -> (f64, f64) {
    w.iter()
        .zip(q.values())
        .filter(|(w, _)| **w > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| {
            (lo.min(*v), hi.max(*v))
        })
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for c in super::run() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
