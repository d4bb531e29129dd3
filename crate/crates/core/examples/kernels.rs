//! Evaluates both kernel families and checks their masses by quadrature.
use stoqi::{Kernel, QuadratureSpec};

fn main() -> stoqi::Result<()> {
    for d in 1..=3 {
        let g = Kernel::gaussian(1.0, d)?;
        let c = Kernel::compact(3.0, d)?;
        let origin = vec![0.0; d];
        let half = vec![0.5 / (d as f64).sqrt(); d];
        let gm = g.mass(QuadratureSpec::default()).unwrap();
        let cm = c.mass(QuadratureSpec::default()).unwrap();
        println!(
            "d={d}  gaussian: psi(0)={:.6} psi(|x|=0.5)={:.6} mass={:.12}   compact: psi(0)={:.1} psi(|x|=0.5)={:.6} mass={:.12}",
            g.eval(&origin)?,
            g.eval(&half)?,
            gm.value,
            c.eval(&origin)?,
            c.eval(&half)?,
            cm.value,
        );
    }
    // ψ_h(x) = h^{-d} ψ(x/h)
    let g = Kernel::gaussian(1.0, 1)?;
    for h in [1.0, 0.1, 0.01] {
        println!("h={h:<5} psi_h(0) = {:.4}", g.eval_scaled(h, &[0.0])?);
    }
    Ok(())
}
