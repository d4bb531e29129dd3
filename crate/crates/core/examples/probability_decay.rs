//! Probability that the error of one draw exceeds ε, as the center count grows.
use stoqi::experiments::{is_near_monotone_decay, powers_of_two};
use stoqi::{run_probability, ExperimentConfig, KernelShape, Metric, Preset, TargetFunction};

fn main() -> stoqi::Result<()> {
    let shape = KernelShape::Gaussian { sigma: 1.0 };
    let metric = Metric::Linf;
    let c = Preset::Table3.constant(&shape, 1, metric).unwrap();
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, shape, metric, c)?;
    cfg.n_grid = powers_of_two(2, 12);
    cfg.replications = 100;
    cfg.epsilons = vec![0.05, 0.1];
    let rows = run_probability(&cfg)?;
    for eps in &cfg.epsilons {
        println!("epsilon = {eps}");
        let curve: Vec<f64> = rows
            .iter()
            .filter(|r| r.epsilon == *eps)
            .map(|r| r.probability)
            .collect();
        for (n, p) in cfg.n_grid.iter().zip(&curve) {
            println!("  n={n:5}  p={p:.3}  {}", "*".repeat((p * 50.0).round() as usize));
        }
        println!(
            "  near-monotone decay: {}",
            is_near_monotone_decay(&curve, cfg.replications)
        );
    }
    Ok(())
}
