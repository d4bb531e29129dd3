//! Experiment configuration files.
//!
//! Two equivalent syntaxes are accepted: flat `key=value` lines (`#` starts a
//! comment) or a single JSON object whose values are strings, numbers or
//! arrays. Recognized keys:
//!
//! | key              | example                                  | default                          |
//! |------------------|------------------------------------------|----------------------------------|
//! | `target`         | `absx`, `trig3`, `sine11`, `one`         | required (except `orders`)       |
//! | `kernel`         | `gaussian(sigma=1.0)`, `compact(beta=3.0)` | `gaussian(sigma=1.0)`          |
//! | `law`            | `uniform`, `truncnormal(mean=auto,stddev=auto)` | `truncnormal(...auto)`    |
//! | `metric`         | `L1`, `Linf`                             | `L1`                             |
//! | `n_grid`         | `64,128,256` or `2^6..2^11`              | `2^6..2^11`                      |
//! | `h_constant`     | `0.3`                                    | from `preset`, else required     |
//! | `preset`         | `table2`, `table3`                       | none (`orders`: `table2`)        |
//! | `replications`   | `200`                                    | `200`                            |
//! | `test_points`    | `100`                                    | `100`                            |
//! | `seed`           | `1`                                      | `1`                              |
//! | `epsilons`       | `0.05,0.1`                               | `0.05,0.1`                       |
//! | `max_empty_rate` | `0.1`                                    | `0.1`                            |
//! | `n`              | `2048` (center count for `eval`)         | last entry of `n_grid`           |
//! | `kernels`        | `gaussian,compact` (`orders` only)       | both                             |
//! | `dims`           | `1,3,11` (`orders` only)                 | all three                        |
//! | `metrics`        | `L1,Linf` (`orders` only)                | both                             |

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::{
    powers_of_two, ExperimentConfig, Metric, Preset, Table1Cell, Table1Plan, DEFAULT_MAX_EMPTY_RATE,
    DEFAULT_REPLICATIONS, DEFAULT_TEST_POINTS,
};
use crate::kernels::{Kernel, KernelShape};
use crate::targets::TargetFunction;

pub const KNOWN_KEYS: &[&str] = &[
    "target",
    "kernel",
    "law",
    "metric",
    "n_grid",
    "h_constant",
    "preset",
    "replications",
    "test_points",
    "seed",
    "epsilons",
    "max_empty_rate",
    "n",
    "kernels",
    "dims",
    "metrics",
];

/// Unvalidated key/value pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_key_values(text)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn parse_key_values(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key=value`, got `{line}`"),
                )
            })?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    fn parse_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::config("<json>", e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::config("<json>", "top level must be an object"))?;
        let mut raw = Self::default();
        for (k, v) in obj {
            let s = json_scalar(k, v)?;
            raw.set(k, &s)?;
        }
        Ok(raw)
    }

    /// Sets a key, rejecting unknown ones.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::config(
                key,
                format!("unknown key (known keys: {})", KNOWN_KEYS.join(", ")),
            ));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| Error::config(key, format!("`{v}`: {e}"))))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<T>().map_err(|e| Error::config(key, format!("`{s}`: {e}"))))
                    .collect()
            })
            .transpose()
    }

    fn n_grid(&self) -> Result<Option<Vec<usize>>> {
        match self.get("n_grid") {
            None => Ok(None),
            Some(v) => parse_n_grid(v).map(Some),
        }
    }

    /// Validated single-experiment config.
    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let target: TargetFunction = self
            .parsed("target")?
            .ok_or_else(|| Error::config("target", "missing required key"))?;
        let shape: KernelShape = self.parsed("kernel")?.unwrap_or(KernelShape::Gaussian { sigma: 1.0 });
        let metric: Metric = self.parsed("metric")?.unwrap_or(Metric::L1);
        let h_constant = match (self.parsed::<f64>("h_constant")?, self.parsed::<Preset>("preset")?) {
            (Some(c), _) => c,
            (None, Some(p)) => p
                .constant(&shape, target.dim(), metric)
                .ok_or_else(|| Error::config("preset", format!("no {} constant for target `{target}`", p.name())))?,
            (None, None) => return Err(Error::config("h_constant", "missing (set h_constant or preset)")),
        };
        let cfg = ExperimentConfig {
            target,
            kernel: Kernel::new(shape, target.dim()).map_err(|e| Error::config("kernel", e.to_string()))?,
            law: self.parsed("law")?.unwrap_or_default(),
            metric,
            n_grid: self.n_grid()?.unwrap_or_else(|| powers_of_two(6, 11)),
            h_constant,
            replications: self.parsed("replications")?.unwrap_or(DEFAULT_REPLICATIONS),
            test_points: self.parsed("test_points")?.unwrap_or(DEFAULT_TEST_POINTS),
            base_seed: self.parsed("seed")?.unwrap_or(1),
            epsilons: self.list("epsilons")?.unwrap_or_else(|| vec![0.05, 0.1]),
            max_empty_rate: self.parsed("max_empty_rate")?.unwrap_or(DEFAULT_MAX_EMPTY_RATE),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Center count for `eval`.
    pub fn eval_n(&self, cfg: &ExperimentConfig) -> Result<usize> {
        let n = self
            .parsed::<usize>("n")?
            .unwrap_or(*cfg.n_grid.last().expect("validated"));
        if n == 0 {
            return Err(Error::config("n", "must be >= 1"));
        }
        Ok(n)
    }

    /// Plan for the order table.
    pub fn table1_plan(&self) -> Result<Table1Plan> {
        let mut plan = Table1Plan::full();
        let kernels: Vec<KernelShape> = match (
            self.list::<KernelShape>("kernels")?,
            self.parsed::<KernelShape>("kernel")?,
        ) {
            (Some(k), _) => k,
            (None, Some(k)) => vec![k],
            (None, None) => vec![
                KernelShape::Gaussian { sigma: 1.0 },
                KernelShape::CompactPower { beta: 3.0 },
            ],
        };
        let dims: Vec<usize> = self.list("dims")?.unwrap_or_else(|| vec![1, 3, 11]);
        let metrics: Vec<Metric> = match (self.list::<Metric>("metrics")?, self.parsed::<Metric>("metric")?) {
            (Some(m), _) => m,
            (None, Some(m)) => vec![m],
            (None, None) => vec![Metric::L1, Metric::Linf],
        };
        if let Some(d) = dims.iter().find(|d| TargetFunction::for_dimension(**d).is_none()) {
            return Err(Error::config(
                "dims",
                format!("no benchmark target in dimension {d} (use 1, 3, 11)"),
            ));
        }
        if self.get("h_constant").is_some() {
            return Err(Error::config(
                "h_constant",
                "`orders` takes its constants from `preset`",
            ));
        }
        plan.cells.clear();
        for kernel in &kernels {
            for &dim in &dims {
                for &metric in &metrics {
                    plan.cells.push(Table1Cell {
                        kernel: *kernel,
                        dim,
                        metric,
                    });
                }
            }
        }
        if plan.cells.is_empty() {
            return Err(Error::config("dims", "plan has no cells"));
        }
        plan.preset = self.parsed("preset")?.unwrap_or(Preset::Table2);
        if let Some(law) = self.parsed("law")? {
            plan.law = law;
        }
        if let Some(g) = self.n_grid()? {
            plan.n_grid = g;
        }
        if let Some(r) = self.parsed("replications")? {
            plan.replications = r;
        }
        if let Some(t) = self.parsed("test_points")? {
            plan.test_points = t;
        }
        if let Some(s) = self.parsed("seed")? {
            plan.base_seed = s;
        }
        if let Some(m) = self.parsed("max_empty_rate")? {
            plan.max_empty_rate = m;
        }
        // surface per-cell validation errors now
        for cell in &plan.cells {
            plan.cell_config(cell)?;
        }
        Ok(plan)
    }
}

fn json_scalar(key: &str, v: &serde_json::Value) -> Result<String> {
    use serde_json::Value;
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Array(items) => {
            let parts: Result<Vec<String>> = items.iter().map(|i| json_scalar(key, i)).collect();
            Ok(parts?.join(","))
        }
        _ => Err(Error::config(key, "expected a string, number or array")),
    }
}

/// `64,128,256` or `2^6..2^11`.
pub fn parse_n_grid(v: &str) -> Result<Vec<usize>> {
    let err = |m: String| Error::config("n_grid", m);
    if let Some((a, b)) = v.split_once("..") {
        let exp = |s: &str| -> Result<u32> {
            let s = s.trim();
            let e = s
                .strip_prefix("2^")
                .ok_or_else(|| err(format!("range bounds must look like 2^k, got `{s}`")))?;
            let e: u32 = e.parse().map_err(|_| err(format!("bad exponent `{e}`")))?;
            if e > 40 {
                return Err(err(format!("exponent {e} is too large")));
            }
            Ok(e)
        };
        let (lo, hi) = (exp(a)?, exp(b)?);
        if lo > hi {
            return Err(err(format!("empty range {v}")));
        }
        return Ok(powers_of_two(lo, hi));
    }
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| err(format!("`{s}` is not a positive integer")))
        })
        .collect()
}

/// Renders a config as `key=value` lines that parse back to the same config.
pub fn to_key_values(cfg: &ExperimentConfig) -> String {
    let list = |v: &[String]| v.join(",");
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(k);
        out.push('=');
        out.push_str(&v);
        out.push('\n');
    };
    line("target", cfg.target.to_string());
    line("kernel", cfg.kernel.shape.to_string());
    line("law", cfg.law.to_string());
    line("metric", cfg.metric.to_string());
    line(
        "n_grid",
        list(&cfg.n_grid.iter().map(|n| n.to_string()).collect::<Vec<_>>()),
    );
    line("h_constant", format!("{:?}", cfg.h_constant));
    line("replications", cfg.replications.to_string());
    line("test_points", cfg.test_points.to_string());
    line("seed", cfg.base_seed.to_string());
    line(
        "epsilons",
        list(&cfg.epsilons.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>()),
    );
    line("max_empty_rate", format!("{:?}", cfg.max_empty_rate));
    out
}

/// Renders an order-table plan as `key=value` lines.
pub fn plan_to_key_values(plan: &Table1Plan) -> String {
    let mut kernels: Vec<String> = Vec::new();
    let mut dims: Vec<String> = Vec::new();
    let mut metrics: Vec<String> = Vec::new();
    for c in &plan.cells {
        for (set, v) in [
            (&mut kernels, c.kernel.to_string()),
            (&mut dims, c.dim.to_string()),
            (&mut metrics, c.metric.to_string()),
        ] {
            if !set.contains(&v) {
                set.push(v);
            }
        }
    }
    format!(
        "kernels={}\ndims={}\nmetrics={}\npreset={}\nlaw={}\nn_grid={}\nreplications={}\ntest_points={}\nseed={}\nmax_empty_rate={:?}\n",
        kernels.join(","),
        dims.join(","),
        metrics.join(","),
        plan.preset.name(),
        plan.law,
        plan.n_grid.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
        plan.replications,
        plan.test_points,
        plan.base_seed,
        plan.max_empty_rate,
    )
}
