use std::collections::HashSet;

use stoqi::sampling::{mix64, SplitMix64};
use stoqi::{derive_replication_seed, sample_centers, BoxDomain, Error, SamplingLaw};

#[test]
fn uniform_passes_kolmogorov_smirnov() {
    let dom = BoxDomain::cube(0.0, 1.0, 1).unwrap();
    let n = 10_000;
    let pts = sample_centers(&SamplingLaw::Uniform, &dom, n, 2024).unwrap();
    let mut xs: Vec<f64> = pts.as_flat().to_vec();
    xs.sort_by(f64::total_cmp);
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            (x - lo).abs().max((hi - x).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value
    assert!(d < 1.63 / (n as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn derived_seeds_do_not_collide() {
    let mut seen = HashSet::with_capacity(1_000_000);
    for k in 0..1_000_000u64 {
        assert!(seen.insert(derive_replication_seed(7, k)), "collision at {k}");
    }
    assert_ne!(derive_replication_seed(1, 0), derive_replication_seed(2, 0));
}

#[test]
fn mix64_is_a_bijection_on_a_sample() {
    let outs: HashSet<u64> = (0..100_000u64)
        .map(|z| mix64(z.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
        .collect();
    assert_eq!(outs.len(), 100_000);
}

#[test]
fn normal_draws_have_unit_moments() {
    let mut rng = SplitMix64::new(99);
    let n = 200_000;
    let xs: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!(mean.abs() < 0.01, "mean {mean}");
    assert!((var - 1.0).abs() < 0.01, "variance {var}");
}

#[test]
fn truncated_normal_is_contained_and_centered() {
    let dom = BoxDomain::new(vec![-1.0, 0.0, 2.0], vec![1.0, 4.0, 3.0]).unwrap();
    let pts = sample_centers(&SamplingLaw::default(), &dom, 20_000, 5).unwrap();
    assert_eq!(pts.len(), 20_000);
    let mut mean = [0.0; 3];
    for p in pts.iter() {
        assert!(dom.contains(p));
        for i in 0..3 {
            mean[i] += p[i] / 20_000.0;
        }
    }
    for (m, c) in mean.iter().zip(dom.center()) {
        assert!((m - c).abs() < 0.01, "{mean:?}");
    }
}

#[test]
fn standard_truncated_normal_on_the_symmetric_interval() {
    let dom = BoxDomain::cube(-1.0, 1.0, 1).unwrap();
    let law = SamplingLaw::TruncatedNormal {
        mean: Some(vec![0.0]),
        stddev: Some(1.0),
    };
    let pts = sample_centers(&law, &dom, 100_000, 7).unwrap();
    let mean = pts.as_flat().iter().sum::<f64>() / 1e5;
    assert!(mean.abs() < 0.02, "{mean}");
    assert_eq!(sample_centers(&law, &dom, 1, 7).unwrap().len(), 1);
}

#[test]
fn same_seed_same_points_different_seed_different_points() {
    let dom = BoxDomain::cube(-1.0, 1.0, 3).unwrap();
    let law = SamplingLaw::default();
    let a = sample_centers(&law, &dom, 500, 1).unwrap();
    let b = sample_centers(&law, &dom, 500, 1).unwrap();
    let c = sample_centers(&law, &dom, 500, 2).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn hopeless_law_is_reported_as_pathological() {
    // mean in a corner: each axis accepts about half the draws, 2^-25 overall
    let dom = BoxDomain::cube(0.0, 1.0, 25).unwrap();
    let law = SamplingLaw::TruncatedNormal {
        mean: Some(vec![1.0]),
        stddev: Some(1e-3),
    };
    match sample_centers(&law, &dom, 10, 1) {
        Err(Error::PathologicalLaw { acceptance }) => assert!(acceptance < 1e-6),
        other => panic!("expected a pathological-law error, got {other:?}"),
    }
}

#[test]
fn law_strings() {
    let l: SamplingLaw = "truncnormal(mean=0.5,stddev=0.2)".parse().unwrap();
    assert_eq!(
        l,
        SamplingLaw::TruncatedNormal {
            mean: Some(vec![0.5]),
            stddev: Some(0.2)
        }
    );
    assert_eq!(l.to_string().parse::<SamplingLaw>().unwrap(), l);
    assert_eq!("uniform".parse::<SamplingLaw>().unwrap(), SamplingLaw::Uniform);
    assert!("cauchy".parse::<SamplingLaw>().is_err());
}

#[test]
fn bad_domains_and_counts() {
    assert!(BoxDomain::new(vec![0.0], vec![0.0]).is_err());
    assert!(BoxDomain::new(vec![0.0, 1.0], vec![1.0]).is_err());
    let dom = BoxDomain::cube(0.0, 1.0, 2).unwrap();
    assert!(sample_centers(&SamplingLaw::Uniform, &dom, 0, 1).is_err());
    let outside = SamplingLaw::TruncatedNormal {
        mean: Some(vec![3.0]),
        stddev: None,
    };
    assert!(sample_centers(&outside, &dom, 5, 1).is_err());
}
