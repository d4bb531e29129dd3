//! Empirical mean errors and fitted orders for |x| in one dimension.
//!
//! Pass a replication count as the first argument (default 100).
use stoqi::{a_priori_order, fit_loglinear, run_emae, ExperimentConfig, KernelShape, Metric, Preset, TargetFunction};

fn main() -> stoqi::Result<()> {
    let reps: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let shape = KernelShape::Gaussian { sigma: 1.0 };
    for metric in [Metric::L1, Metric::Linf] {
        let c = Preset::Table2.constant(&shape, 1, metric).unwrap();
        let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, shape, metric, c)?;
        cfg.replications = reps;
        let recs = run_emae(&cfg)?;
        println!("{metric} (C = {c})");
        for r in &recs {
            println!("  n={:5}  h={:.4}  emae={:.3e} ± {:.1e}", r.n, r.h, r.emae, r.stderr);
        }
        let fit = fit_loglinear(&recs)?;
        let prior = a_priori_order(1.0, 1, metric.regime());
        println!(
            "  fitted delta = {:.3} (K = {:.3}), a-priori {:.3}{}",
            fit.delta_hat,
            fit.k_hat,
            prior.order,
            if prior.log_factor { " up to a log factor" } else { "" }
        );
    }
    Ok(())
}
