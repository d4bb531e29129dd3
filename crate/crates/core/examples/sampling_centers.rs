//! Draws reproducible centers from uniform and truncated-normal laws.
use stoqi::{derive_replication_seed, sample_centers, BoxDomain, SamplingLaw};

fn main() -> stoqi::Result<()> {
    let dom = BoxDomain::cube(-1.0, 1.0, 1)?;
    let laws: [SamplingLaw; 3] = [
        SamplingLaw::Uniform,
        SamplingLaw::default(),
        "truncnormal(mean=0.5,stddev=0.2)".parse()?,
    ];
    for law in &laws {
        let pts = sample_centers(law, &dom, 20_000, derive_replication_seed(1, 0))?;
        let mut hist = [0usize; 10];
        for p in pts.iter() {
            hist[(((p[0] + 1.0) * 5.0) as usize).min(9)] += 1;
        }
        println!("{law}");
        for (i, c) in hist.iter().enumerate() {
            let lo = -1.0 + 0.2 * i as f64;
            println!("  [{lo:+.1}, {:+.1})  {}", lo + 0.2, "#".repeat(c / 100));
        }
    }
    let a = sample_centers(&SamplingLaw::default(), &dom, 5, 7)?;
    let b = sample_centers(&SamplingLaw::default(), &dom, 5, 7)?;
    assert_eq!(a, b);
    println!("seed 7 -> {:?}", a.as_flat());
    Ok(())
}
