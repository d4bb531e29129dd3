//! Builds Q_h f for |x| from random centers and prints it next to f.
use stoqi::{bandwidth, sample_centers, Kernel, QuasiInterpolant, SamplingLaw, TargetFunction};

fn main() -> stoqi::Result<()> {
    let f = TargetFunction::AbsX;
    let n = 1024;
    let centers = sample_centers(&SamplingLaw::default(), &f.domain(), n, 11)?;
    let values = centers.iter().map(|p| f.eval(p)).collect::<stoqi::Result<Vec<_>>>()?;

    for kernel in [Kernel::gaussian(1.0, 1)?, Kernel::compact(3.0, 1)?] {
        let c = if kernel.shape.is_compact() { 1.0 } else { 0.3 };
        let h = bandwidth(n, c, 1);
        let q = QuasiInterpolant::build(centers.clone(), values.clone(), kernel, h)?;
        println!("{} with h = {h:.4}", kernel.shape);
        println!("     x      f(x)    Q f(x)   r_h(x)  active");
        for i in 0..=10 {
            let x = -1.0 + 0.2 * i as f64;
            let r = q.evaluate(&[x])?;
            println!(
                "{x:+6.2}  {:8.5}  {:8.5}  {:7.4}  {:6}",
                x.abs(),
                r.value,
                r.denominator,
                r.active_centers
            );
        }
    }
    Ok(())
}
