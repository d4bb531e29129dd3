use stoqi::experiments::{fit_loglinear_points, is_near_monotone_decay, powers_of_two, run_replications};
use stoqi::sampling::SplitMix64;
use stoqi::{
    a_priori_order, run_emae, run_probability, sample_centers, Error, ExperimentConfig, KernelShape, Metric,
    TargetFunction,
};

const GAUSS: KernelShape = KernelShape::Gaussian { sigma: 1.0 };

#[test]
fn single_center_emae_matches_brute_force() {
    // with one center Q f is the constant f(X_1)
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::L1, 0.3).unwrap();
    cfg.n_grid = vec![1];
    cfg.replications = 25;
    let rec = run_emae(&cfg).unwrap()[0];
    let tests = cfg.test_point_set().unwrap();
    let mut errs = Vec::new();
    for k in 0..25 {
        let c = sample_centers(&cfg.law, &cfg.target.domain(), 1, cfg.center_seed(1, k)).unwrap();
        let fc = c.point(0)[0].abs();
        errs.push(tests.iter().map(|t| (t[0].abs() - fc).abs()).sum::<f64>() / tests.len() as f64);
    }
    let mean = errs.iter().sum::<f64>() / 25.0;
    let sd = (errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / 24.0).sqrt();
    assert!((rec.emae - mean).abs() < 1e-12);
    assert!((rec.stderr - sd / 5.0).abs() < 1e-12);
    assert_eq!(rec.empty_neighborhood_rate, 0.0);
    assert_eq!(rec.h, 0.3);
}

#[test]
fn more_replications_agree_within_standard_errors() {
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::L1, 0.3).unwrap();
    cfg.n_grid = vec![256];
    cfg.replications = 200;
    let a = run_emae(&cfg).unwrap()[0];
    cfg.replications = 400;
    let b = run_emae(&cfg).unwrap()[0];
    // the first 200 replications are shared, so this is conservative
    assert!((a.emae - b.emae).abs() <= 3.0 * a.stderr.hypot(b.stderr), "{a:?} {b:?}");
}

#[test]
fn replication_streams_are_prefix_stable() {
    let mut cfg = ExperimentConfig::new(TargetFunction::TrigProduct3D, GAUSS, Metric::Linf, 0.3).unwrap();
    cfg.n_grid = vec![64, 128];
    cfg.replications = 10;
    let short = run_replications(&cfg).unwrap();
    cfg.replications = 20;
    let long = run_replications(&cfg).unwrap();
    for (s, l) in short.iter().zip(&long) {
        assert_eq!(s.errors[..], l.errors[..10]);
    }
}

#[test]
fn fit_recovers_slope_under_multiplicative_noise() {
    // e_n = 2 n^{-1/3} (1 + 0.01 ξ), six grid points
    let ns = powers_of_two(6, 11);
    let mut deltas = Vec::new();
    for seed in 0..100 {
        let mut rng = SplitMix64::new(seed);
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                let e = 2.0 * (n as f64).powf(-1.0 / 3.0) * (1.0 + 0.01 * rng.next_normal());
                (n as f64, e)
            })
            .collect();
        deltas.push(fit_loglinear_points(&pts).unwrap().delta_hat);
    }
    let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
    assert!((0.30..=0.37).contains(&mean), "mean slope {mean}");
    assert!(deltas.iter().all(|d| (0.30..=0.37).contains(d)));
}

#[test]
fn fit_rejects_degenerate_input() {
    assert!(matches!(fit_loglinear_points(&[(64.0, 0.1)]), Err(Error::Fit(_))));
    assert!(fit_loglinear_points(&[(64.0, 0.1), (64.0, 0.2)]).is_err());
    assert!(fit_loglinear_points(&[(64.0, 0.0), (128.0, 0.2)]).is_err());
}

#[test]
fn a_priori_orders_match_the_truncated_table() {
    use stoqi::experiments::PRegime;
    for (d, want) in [(1, 0.33), (3, 0.20), (11, 0.07)] {
        let o = a_priori_order(1.0, d, PRegime::LeTwo);
        assert!((o.order - 1.0 / (2.0 + d as f64)).abs() < 1e-15);
        // the table truncates to two decimals (1/13 is listed as 0.07)
        assert!(((o.order * 100.0).floor() / 100.0 - want).abs() < 1e-12);
        assert!(!o.log_factor);
        assert!(a_priori_order(1.0, d, PRegime::GtTwo).log_factor);
    }
}

#[test]
fn constant_target_has_zero_error() {
    for shape in [GAUSS, KernelShape::CompactPower { beta: 3.0 }] {
        let mut cfg = ExperimentConfig::new(TargetFunction::ConstantOne, shape, Metric::Linf, 0.8).unwrap();
        cfg.n_grid = vec![16, 64];
        cfg.replications = 20;
        cfg.max_empty_rate = 1.0;
        for r in run_emae(&cfg).unwrap() {
            assert!(r.emae.abs() <= 1e-12, "{r:?}");
        }
    }
}

#[test]
fn constant_target_never_exceeds() {
    let mut cfg = ExperimentConfig::new(TargetFunction::ConstantOne, GAUSS, Metric::Linf, 0.3).unwrap();
    cfg.n_grid = vec![4, 32];
    cfg.replications = 50;
    cfg.epsilons = vec![1e-9, 0.1];
    let rows = run_probability(&cfg).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.probability == 0.0 && r.replications == 50));
}

#[test]
fn huge_threshold_is_never_exceeded() {
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::Linf, 0.2).unwrap();
    cfg.n_grid = vec![4, 16];
    cfg.replications = 50;
    cfg.epsilons = vec![10.0];
    assert!(run_probability(&cfg).unwrap().iter().all(|r| r.probability == 0.0));
}

#[test]
fn probability_drops_between_small_and_large_n() {
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::L1, 0.2).unwrap();
    cfg.n_grid = vec![1 << 4, 1 << 14];
    cfg.epsilons = vec![0.1];
    let rows = run_probability(&cfg).unwrap();
    assert_eq!(rows[0].replications, 200);
    assert!(rows[1].probability < rows[0].probability, "{rows:?}");
}

#[test]
fn empty_neighborhoods_abort_the_run() {
    let mut cfg = ExperimentConfig::new(
        TargetFunction::AbsX,
        KernelShape::CompactPower { beta: 3.0 },
        Metric::L1,
        0.05,
    )
    .unwrap();
    cfg.n_grid = vec![8];
    cfg.replications = 20;
    let err = run_emae(&cfg).unwrap_err();
    assert!(matches!(err, Error::ExperimentAborted { n: 8, .. }));
    assert_eq!(err.exit_code(), 3);
    cfg.max_empty_rate = 1.0;
    cfg.h_constant = 0.6;
    let rec = run_emae(&cfg).unwrap()[0];
    assert!(rec.empty_neighborhood_rate > 0.0 && rec.empty_neighborhood_rate < 1.0);
}

#[test]
fn monotone_rule() {
    assert!(is_near_monotone_decay(&[1.0, 1.0, 0.95, 0.5, 0.2, 0.0], 200));
    assert!(is_near_monotone_decay(&[1.0, 0.5, 0.2, 0.21, 0.1], 200));
    assert!(!is_near_monotone_decay(&[1.0, 0.5, 0.2, 0.3, 0.1], 200));
    assert!(!is_near_monotone_decay(&[0.5, 0.2, 0.205, 0.1, 0.105], 200));
}

#[test]
fn invalid_configs_name_the_key() {
    let mut cfg = ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::L1, 0.3).unwrap();
    cfg.n_grid = vec![128, 64];
    match cfg.validate() {
        Err(Error::Config { key, .. }) => assert_eq!(key, "n_grid"),
        other => panic!("{other:?}"),
    }
    assert!(ExperimentConfig::new(TargetFunction::AbsX, GAUSS, Metric::L1, 0.0).is_err());
}
