//! Monte Carlo harness: empirical mean errors, log-linear order fits and
//! exceedance-probability curves.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]. Test
//! points are drawn once per experiment, uniformly on the target's domain,
//! and shared across all center counts. Replication `k` at center count `n`
//! draws its centers from
//! `derive_replication_seed(derive_replication_seed(base_seed, n), k)`;
//! test points use `derive_replication_seed(base_seed, u64::MAX)`.
//! Replications run on the rayon pool and are reduced in index order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{Kernel, KernelShape};
use crate::points::PointSet;
use crate::quasi::{QuasiInterpolant, Scratch};
use crate::sampling::{derive_replication_seed, sample_centers, SamplingLaw};
use crate::targets::TargetFunction;

const TEST_POINT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    L1,
    Linf,
}

impl Metric {
    /// Per-replication error: mean (L1) or max (L∞) absolute error.
    pub fn reduce(&self, abs_errors: &[f64]) -> f64 {
        match self {
            Metric::L1 => abs_errors.iter().sum::<f64>() / abs_errors.len() as f64,
            Metric::Linf => abs_errors.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn regime(&self) -> PRegime {
        match self {
            Metric::L1 => PRegime::LeTwo,
            Metric::Linf => PRegime::GtTwo,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::L1 => "L1",
            Metric::Linf => "Linf",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "linf" | "l_inf" | "inf" => Ok(Metric::Linf),
            _ => Err(Error::InvalidParameter(format!(
                "unknown metric `{s}` (expected L1 or Linf)"
            ))),
        }
    }
}

/// Range of the norm exponent p for the a-priori rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PRegime {
    /// 1 <= p <= 2
    LeTwo,
    /// 2 < p <= ∞, where the rate carries an extra `(log N)^{1/2}`.
    GtTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AprioriOrder {
    pub order: f64,
    pub log_factor: bool,
}

/// Theoretical mean-error exponent `s / (2s + d)`.
pub fn a_priori_order(s: f64, d: usize, regime: PRegime) -> AprioriOrder {
    AprioriOrder {
        order: s / (2.0 * s + d as f64),
        log_factor: regime == PRegime::GtTwo,
    }
}

/// `h = c (1/n)^{1/(2+d)}`.
pub fn bandwidth(n: usize, c: f64, d: usize) -> f64 {
    c * (1.0 / n as f64).powf(1.0 / (2 + d) as f64)
}

/// Bandwidth constants tuned per (kernel, dimension, metric).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Constants for the convergence-order experiments.
    Table2,
    /// Constants for the exceedance-probability experiments.
    Table3,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Table2 => "table2",
            Preset::Table3 => "table3",
        }
    }

    pub fn constant(&self, kernel: &KernelShape, d: usize, metric: Metric) -> Option<f64> {
        // rows: d = 1, 3, 11; columns: (σ L1, β L1, σ L∞, β L∞)
        let table: [[f64; 4]; 3] = match self {
            Preset::Table2 => [
                [0.30, 1.00, 0.10, 1.00],
                [0.30, 1.50, 0.10, 1.50],
                [0.30, 2.00, 0.10, 2.00],
            ],
            Preset::Table3 => [
                [0.20, 1.50, 0.20, 1.00],
                [0.20, 1.00, 0.10, 2.00],
                [0.30, 2.00, 0.30, 2.00],
            ],
        };
        let row = match d {
            1 => 0,
            3 => 1,
            11 => 2,
            _ => return None,
        };
        let col = match (kernel.is_compact(), metric) {
            (false, Metric::L1) => 0,
            (true, Metric::L1) => 1,
            (false, Metric::Linf) => 2,
            (true, Metric::Linf) => 3,
        };
        Some(table[row][col])
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "table2" => Ok(Preset::Table2),
            "table3" => Ok(Preset::Table3),
            _ => Err(Error::InvalidParameter(format!(
                "unknown preset `{s}` (expected table2 or table3)"
            ))),
        }
    }
}

/// Full description of a reproducible run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub target: TargetFunction,
    pub kernel: Kernel,
    pub law: SamplingLaw,
    pub metric: Metric,
    /// Strictly increasing center counts.
    pub n_grid: Vec<usize>,
    /// Bandwidth constant: `h = h_constant (1/n)^{1/(2+d)}`.
    pub h_constant: f64,
    pub replications: usize,
    pub test_points: usize,
    pub base_seed: u64,
    pub epsilons: Vec<f64>,
    /// Abort when more than this fraction of replications hit an empty neighborhood.
    pub max_empty_rate: f64,
}

pub const DEFAULT_REPLICATIONS: usize = 200;
pub const DEFAULT_TEST_POINTS: usize = 100;
pub const DEFAULT_MAX_EMPTY_RATE: f64 = 0.10;

/// 2^lo, ..., 2^hi.
pub fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|j| 1usize << j).collect()
}

impl ExperimentConfig {
    /// A config with desk-scale defaults for `target` and `kernel` shape.
    pub fn new(target: TargetFunction, shape: KernelShape, metric: Metric, h_constant: f64) -> Result<Self> {
        let cfg = Self {
            target,
            kernel: Kernel::new(shape, target.dim())?,
            law: SamplingLaw::default(),
            metric,
            n_grid: powers_of_two(6, 11),
            h_constant,
            replications: DEFAULT_REPLICATIONS,
            test_points: DEFAULT_TEST_POINTS,
            base_seed: 1,
            epsilons: vec![0.05, 0.1],
            max_empty_rate: DEFAULT_MAX_EMPTY_RATE,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(Error::config(key, msg));
        if self.kernel.dim != self.target.dim() {
            return bad(
                "kernel",
                format!(
                    "kernel dimension {} does not match target dimension {}",
                    self.kernel.dim,
                    self.target.dim()
                ),
            );
        }
        if self.n_grid.is_empty() || self.n_grid[0] == 0 {
            return bad("n_grid", "needs at least one positive center count".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_grid", "must be strictly increasing".into());
        }
        if !(self.h_constant.is_finite() && self.h_constant > 0.0) {
            return bad("h_constant", format!("must be positive, got {}", self.h_constant));
        }
        if self.replications == 0 {
            return bad("replications", "must be >= 1".into());
        }
        if self.test_points == 0 {
            return bad("test_points", "must be >= 1".into());
        }
        if self.epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return bad("epsilons", "every threshold must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.max_empty_rate) {
            return bad("max_empty_rate", "must lie in [0, 1]".into());
        }
        Ok(())
    }

    pub fn bandwidth(&self, n: usize) -> f64 {
        bandwidth(n, self.h_constant, self.dim())
    }

    /// The shared test points.
    pub fn test_point_set(&self) -> Result<PointSet> {
        sample_centers(
            &SamplingLaw::Uniform,
            &self.target.domain(),
            self.test_points,
            derive_replication_seed(self.base_seed, TEST_POINT_STREAM),
        )
    }

    /// Seed of replication `k` at center count `n`.
    pub fn center_seed(&self, n: usize, k: usize) -> u64 {
        derive_replication_seed(derive_replication_seed(self.base_seed, n as u64), k as u64)
    }
}

/// Per-replication errors at one center count; `None` marks an
/// empty-neighborhood failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationErrors {
    pub n: usize,
    pub h: f64,
    pub errors: Vec<Option<f64>>,
}

impl ReplicationErrors {
    pub fn successes(&self) -> impl Iterator<Item = f64> + '_ {
        self.errors.iter().flatten().copied()
    }

    pub fn success_count(&self) -> usize {
        self.errors.iter().filter(|e| e.is_some()).count()
    }

    pub fn empty_rate(&self) -> f64 {
        1.0 - self.success_count() as f64 / self.errors.len() as f64
    }
}

/// Runs every replication at center count `n`, in parallel.
pub fn replicate(cfg: &ExperimentConfig, n: usize, tests: &PointSet, truth: &[f64]) -> Result<ReplicationErrors> {
    let h = cfg.bandwidth(n);
    let domain = cfg.target.domain();
    let errors = (0..cfg.replications)
        .into_par_iter()
        .map(|k| -> Result<Option<f64>> {
            let centers = sample_centers(&cfg.law, &domain, n, cfg.center_seed(n, k))?;
            let values: Vec<f64> = centers.iter().map(|p| cfg.target.eval_unchecked(p)).collect();
            let q = QuasiInterpolant::build(centers, values, cfg.kernel, h)?;
            let mut scratch = Scratch::default();
            let mut abs = Vec::with_capacity(tests.len());
            for (t, f_t) in tests.iter().zip(truth) {
                match q.evaluate_with(t, &mut scratch) {
                    Ok(r) => abs.push((r.value - f_t).abs()),
                    Err(Error::EmptyNeighborhood { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
            Ok(Some(cfg.metric.reduce(&abs)))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = ReplicationErrors { n, h, errors };
    let rate = out.empty_rate();
    if rate > cfg.max_empty_rate || out.success_count() == 0 {
        return Err(Error::ExperimentAborted {
            n,
            rate,
            limit: cfg.max_empty_rate,
        });
    }
    Ok(out)
}

/// Replication errors for every center count of the config.
pub fn run_replications(cfg: &ExperimentConfig) -> Result<Vec<ReplicationErrors>> {
    cfg.validate()?;
    let tests = cfg.test_point_set()?;
    let truth: Vec<f64> = tests.iter().map(|t| cfg.target.eval_unchecked(t)).collect();
    cfg.n_grid.iter().map(|&n| replicate(cfg, n, &tests, &truth)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub n: usize,
    pub h: f64,
    /// Mean over successful replications of the per-replication error.
    pub emae: f64,
    /// Standard error of that mean (0 with a single replication).
    pub stderr: f64,
    pub empty_neighborhood_rate: f64,
}

impl ErrorRecord {
    pub fn from_replications(r: &ReplicationErrors) -> Self {
        let m = r.success_count() as f64;
        let mean = r.successes().sum::<f64>() / m;
        let stderr = if m > 1.0 {
            let var = r.successes().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        } else {
            0.0
        };
        Self {
            n: r.n,
            h: r.h,
            emae: mean,
            stderr,
            empty_neighborhood_rate: r.empty_rate(),
        }
    }
}

/// Empirical mean L1 or L∞ error at each center count.
pub fn run_emae(cfg: &ExperimentConfig) -> Result<Vec<ErrorRecord>> {
    Ok(run_replications(cfg)?
        .iter()
        .map(ErrorRecord::from_replications)
        .collect())
}

/// Ordinary least squares of `ln emae = ln K - δ ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub k_hat: f64,
    pub delta_hat: f64,
    pub residual_rms: f64,
    pub n_points_used: usize,
}

/// Fits the log-linear model to `(n, error)` pairs. Nonpositive or
/// non-finite errors are skipped with a warning.
pub fn fit_loglinear_points(points: &[(f64, f64)]) -> Result<FitResult> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| {
            let ok = *e > 0.0 && e.is_finite() && *n > 0.0;
            if !ok {
                log::warn!("excluding record n = {n}, error = {e} from the log-linear fit");
            }
            ok
        })
        .map(|(n, e)| (n.ln(), e.ln()))
        .collect();
    if usable.len() < 2 {
        return Err(Error::Fit(format!("{} usable records, need at least 2", usable.len())));
    }
    let m = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / m;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("all records share the same n".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = usable
        .iter()
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(FitResult {
        k_hat: intercept.exp(),
        delta_hat: -slope,
        residual_rms: (ss / m).sqrt(),
        n_points_used: usable.len(),
    })
}

pub fn fit_loglinear(records: &[ErrorRecord]) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.emae)).collect();
    fit_loglinear_points(&pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRow {
    pub n: usize,
    pub epsilon: f64,
    /// Fraction of successful replications whose error exceeds `epsilon`.
    pub probability: f64,
    /// Successful replications the fraction is taken over.
    pub replications: usize,
}

/// Empirical exceedance probabilities for every (n, ε).
pub fn run_probability(cfg: &ExperimentConfig) -> Result<Vec<ProbabilityRow>> {
    if cfg.epsilons.is_empty() {
        return Err(Error::config(
            "epsilons",
            "probability experiments need at least one threshold",
        ));
    }
    let reps = run_replications(cfg)?;
    Ok(probability_rows(&reps, &cfg.epsilons))
}

pub fn probability_rows(reps: &[ReplicationErrors], epsilons: &[f64]) -> Vec<ProbabilityRow> {
    let mut rows = Vec::with_capacity(reps.len() * epsilons.len());
    for r in reps {
        let m = r.success_count();
        for &eps in epsilons {
            let exceed = r.successes().filter(|e| *e > eps).count();
            rows.push(ProbabilityRow {
                n: r.n,
                epsilon: eps,
                probability: exceed as f64 / m as f64,
                replications: m,
            });
        }
    }
    rows
}

/// Near-monotone decay: after the curve first drops below 0.9 it may rise
/// at most once, and by at most `2 / replications`.
pub fn is_near_monotone_decay(probabilities: &[f64], replications: usize) -> bool {
    let Some(start) = probabilities.iter().position(|p| *p < 0.9) else {
        return true;
    };
    let slack = 2.0 / replications as f64;
    let mut violations = 0;
    for w in probabilities[start..].windows(2) {
        if w[1] > w[0] {
            if w[1] - w[0] > slack + 1e-12 {
                return false;
            }
            violations += 1;
        }
    }
    violations <= 1
}

/// One (kernel, dimension, metric) cell of the order table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Cell {
    pub kernel: KernelShape,
    pub dim: usize,
    pub metric: Metric,
}

/// Published (a-priori, a-posteriori) orders for σ = 1 / β = 3 kernels,
/// used as a reference column.
pub fn reference_orders(cell: &Table1Cell) -> Option<(f64, f64)> {
    let compact = cell.kernel.is_compact();
    let v = match (compact, cell.dim, cell.metric) {
        (false, 1, Metric::L1) => (0.33, 0.65),
        (false, 3, Metric::L1) => (0.20, 0.32),
        (false, 11, Metric::L1) => (0.07, 0.16),
        (false, 1, Metric::Linf) => (0.33, 0.69),
        (false, 3, Metric::Linf) => (0.20, 0.37),
        (false, 11, Metric::Linf) => (0.07, 0.16),
        (true, 1, Metric::L1) => (0.33, 0.63),
        (true, 3, Metric::L1) => (0.20, 0.24),
        (true, 11, Metric::L1) => (0.07, 0.11),
        (true, 1, Metric::Linf) => (0.33, 0.55),
        (true, 3, Metric::Linf) => (0.20, 0.31),
        (true, 11, Metric::Linf) => (0.07, 0.22),
        _ => return None,
    };
    Some(v)
}

/// Everything needed to run a set of order-table cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Plan {
    pub cells: Vec<Table1Cell>,
    pub preset: Preset,
    pub law: SamplingLaw,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub test_points: usize,
    pub base_seed: u64,
    pub max_empty_rate: f64,
}

impl Table1Plan {
    /// All twelve cells with σ = 1, β = 3 and desk-scale defaults.
    pub fn full() -> Self {
        let mut cells = Vec::new();
        for kernel in [
            KernelShape::Gaussian { sigma: 1.0 },
            KernelShape::CompactPower { beta: 3.0 },
        ] {
            for dim in [1, 3, 11] {
                for metric in [Metric::L1, Metric::Linf] {
                    cells.push(Table1Cell { kernel, dim, metric });
                }
            }
        }
        Self {
            cells,
            preset: Preset::Table2,
            law: SamplingLaw::default(),
            n_grid: powers_of_two(6, 11),
            replications: DEFAULT_REPLICATIONS,
            test_points: DEFAULT_TEST_POINTS,
            base_seed: 1,
            max_empty_rate: DEFAULT_MAX_EMPTY_RATE,
        }
    }

    pub fn cell_config(&self, cell: &Table1Cell) -> Result<ExperimentConfig> {
        let target = TargetFunction::for_dimension(cell.dim)
            .ok_or_else(|| Error::config("dims", format!("no benchmark target in dimension {}", cell.dim)))?;
        let c = self
            .preset
            .constant(&cell.kernel, cell.dim, cell.metric)
            .ok_or_else(|| Error::config("preset", format!("no constant for d = {}", cell.dim)))?;
        let cfg = ExperimentConfig {
            target,
            kernel: Kernel::new(cell.kernel, cell.dim)?,
            law: self.law.clone(),
            metric: cell.metric,
            n_grid: self.n_grid.clone(),
            h_constant: c,
            replications: self.replications,
            test_points: self.test_points,
            base_seed: self.base_seed,
            epsilons: Vec::new(),
            max_empty_rate: self.max_empty_rate,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub kernel: String,
    pub d: usize,
    pub metric: Metric,
    pub h_constant: f64,
    pub a_priori: f64,
    pub log_factor: bool,
    pub delta_hat: f64,
    pub k_hat: f64,
    pub residual_rms: f64,
    pub n_points: usize,
    pub max_empty_rate: f64,
    pub reference_a_priori: Option<f64>,
    pub reference_delta: Option<f64>,
}

pub fn run_table1_cell(plan: &Table1Plan, cell: &Table1Cell) -> Result<Table1Row> {
    let cfg = plan.cell_config(cell)?;
    let records = run_emae(&cfg)?;
    let fit = fit_loglinear(&records)?;
    let apriori = a_priori_order(cfg.target.holder_s(), cell.dim, cell.metric.regime());
    let reference = reference_orders(cell);
    Ok(Table1Row {
        kernel: cell.kernel.to_string(),
        d: cell.dim,
        metric: cell.metric,
        h_constant: cfg.h_constant,
        a_priori: apriori.order,
        log_factor: apriori.log_factor,
        delta_hat: fit.delta_hat,
        k_hat: fit.k_hat,
        residual_rms: fit.residual_rms,
        n_points: fit.n_points_used,
        max_empty_rate: records.iter().map(|r| r.empty_neighborhood_rate).fold(0.0, f64::max),
        reference_a_priori: reference.map(|r| r.0),
        reference_delta: reference.map(|r| r.1),
    })
}

/// A-priori and fitted orders for every cell of the plan, in plan order.
pub fn run_table1(plan: &Table1Plan) -> Result<Vec<Table1Row>> {
    plan.cells.iter().map(|c| run_table1_cell(plan, c)).collect()
}

/// Runs `f` on a dedicated pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_values() {
        assert!((bandwidth(8, 1.0, 1) - 0.5).abs() < 1e-15);
        assert_eq!(bandwidth(1, 0.37, 3), 0.37);
        // 0.30 * 2^{-11/5}, from an independent calculator
        assert!((bandwidth(1 << 11, 0.30, 3) - 0.065_291_292_247_209_3).abs() < 1e-15);
    }

    #[test]
    fn a_priori_values() {
        let o = a_priori_order(1.0, 1, PRegime::LeTwo);
        assert_eq!(o.order, 1.0 / 3.0);
        assert!(!o.log_factor);
        assert_eq!(a_priori_order(1.0, 3, PRegime::GtTwo).order, 0.2);
        assert!(a_priori_order(1.0, 3, PRegime::GtTwo).log_factor);
        assert_eq!(a_priori_order(1.0, 11, PRegime::LeTwo).order, 1.0 / 13.0);
        // published rounding
        assert_eq!(format!("{:.2}", 1.0 / 3.0), "0.33");
        assert_eq!(format!("{:.2}", 0.2), "0.20");
        assert_eq!(((1.0 / 13.0) * 100.0f64).floor() / 100.0, 0.07);
    }

    #[test]
    fn exact_line_fit() {
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 512.0, 2048.0]
            .iter()
            .map(|&n: &f64| (n, (2.0f64.ln() - 0.5 * n.ln()).exp()))
            .collect();
        let fit = fit_loglinear_points(&pts).unwrap();
        assert!((fit.k_hat - 2.0).abs() < 1e-12);
        assert!((fit.delta_hat - 0.5).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);
        assert_eq!(fit.n_points_used, 4);
    }

    #[test]
    fn degenerate_fits() {
        assert!(fit_loglinear_points(&[(64.0, 0.1), (64.0, 0.2)]).is_err());
        assert!(fit_loglinear_points(&[(64.0, 0.1)]).is_err());
        // nonpositive errors are dropped
        let fit = fit_loglinear_points(&[(64.0, 0.0), (128.0, 0.5), (256.0, 0.25)]).unwrap();
        assert_eq!(fit.n_points_used, 2);
        assert!((fit.delta_hat - 1.0).abs() < 1e-12);
        assert!(fit_loglinear_points(&[(64.0, 0.0), (128.0, -1.0), (256.0, 0.25)]).is_err());
    }

    #[test]
    fn presets() {
        let g = KernelShape::Gaussian { sigma: 1.0 };
        let c = KernelShape::CompactPower { beta: 3.0 };
        assert_eq!(Preset::Table2.constant(&g, 1, Metric::L1), Some(0.30));
        assert_eq!(Preset::Table2.constant(&g, 1, Metric::Linf), Some(0.10));
        assert_eq!(Preset::Table3.constant(&c, 3, Metric::Linf), Some(2.00));
        assert_eq!(Preset::Table3.constant(&c, 1, Metric::L1), Some(1.50));
        assert_eq!(Preset::Table2.constant(&c, 2, Metric::L1), None);
    }

    #[test]
    fn monotone_decay_rule() {
        assert!(is_near_monotone_decay(&[1.0, 1.0, 0.8, 0.5, 0.2, 0.0], 200));
        assert!(is_near_monotone_decay(&[1.0, 0.5, 0.505, 0.2], 200));
        assert!(!is_near_monotone_decay(&[1.0, 0.5, 0.6, 0.2], 200));
        assert!(!is_near_monotone_decay(&[0.5, 0.3, 0.305, 0.2, 0.205], 200));
        // rises before the curve drops under 0.9 are ignored
        assert!(is_near_monotone_decay(&[0.95, 1.0, 0.5], 200));
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(
            TargetFunction::AbsX,
            KernelShape::Gaussian { sigma: 1.0 },
            Metric::L1,
            0.3,
        )
        .unwrap();
        cfg.n_grid = vec![64, 64];
        assert!(matches!(cfg.validate(), Err(Error::Config { key, .. }) if key == "n_grid"));
        cfg.n_grid = vec![64];
        cfg.replications = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn metric_reduction() {
        assert_eq!(Metric::L1.reduce(&[1.0, 3.0]), 2.0);
        assert_eq!(Metric::Linf.reduce(&[1.0, 3.0]), 3.0);
        assert_eq!("Linf".parse::<Metric>().unwrap(), Metric::Linf);
        assert_eq!("l1".parse::<Metric>().unwrap(), Metric::L1);
    }
}
