//! The deterministic limit f_min of Q_h f, and sup |f - f_min| / h as h shrinks.
use stoqi::{convolution_oracle, Kernel, QuadratureSpec, SamplingLaw, TargetFunction};

fn main() -> stoqi::Result<()> {
    let f = TargetFunction::AbsX;
    for kernel in [Kernel::gaussian(1.0, 1)?, Kernel::compact(3.0, 1)?] {
        println!("{}", kernel.shape);
        for h in [0.2, 0.1, 0.05, 0.025, 0.0125] {
            let mut sup = 0.0f64;
            let mut err = 0.0f64;
            for i in 0..=256 {
                let x = -1.0 + i as f64 / 128.0;
                let est = convolution_oracle(f, &SamplingLaw::Uniform, &kernel, h, &[x], QuadratureSpec::new(64, 8))?;
                sup = sup.max((x.abs() - est.value).abs());
                err = err.max(est.error_estimate);
            }
            println!(
                "  h={h:<7} sup|f - f_min| = {sup:.6}  ratio = {:.4}  (quadrature error <= {err:.1e})",
                sup / h
            );
        }
    }
    Ok(())
}
