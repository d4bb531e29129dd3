//! Command-line front end: subcommand dispatch, overrides and outputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{plan_to_key_values, to_key_values, RawConfig};
use crate::error::{Error, Result};
use crate::experiments::{run_emae, run_probability, run_table1, with_threads};
use crate::points::PointSet;
use crate::quasi::QuasiInterpolant;
use crate::report::{
    csv_bytes, eval_header, records_csv, sha256_hex, write_atomic, EvalRow, OutputDigest, RunManifest,
};
use crate::sampling::sample_centers;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "stoqi", version, about = "Stochastic quasi-interpolation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// A-priori and fitted convergence orders for (kernel, d, metric) cells.
    Orders(RunArgs),
    /// Exceedance probabilities `n,epsilon,probability,replications`.
    Probability(RunArgs),
    /// Empirical mean errors `n,h,emae,stderr,empty_rate`.
    Convergence(RunArgs),
    /// Evaluate one quasi-interpolant at query points read from CSV.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// CSV with one query point per row (d columns, optional header).
        #[arg(long)]
        points: PathBuf,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Config file (`key=value` lines or a JSON object).
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Extra `key=value` settings applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, env = "STOQI_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Output CSV path; a `<out>.manifest.json` is written next to it.
    /// Without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn raw_config(&self) -> Result<RawConfig> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::config(kv.clone(), "--set expects KEY=VALUE"))?;
            raw.set(k.trim(), v.trim())?;
        }
        if let Some(s) = self.seed {
            raw.set("seed", &s.to_string())?;
        }
        if let Some(r) = self.replications {
            raw.set("replications", &r.to_string())?;
        }
        Ok(raw)
    }
}

fn deliver(
    command: &str,
    args: &RunArgs,
    config_text: String,
    seed: u64,
    started: Instant,
    bytes: Vec<u8>,
) -> Result<()> {
    match &args.out {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).map_err(|e| Error::io("<stdout>", e))?;
            Ok(())
        }
        Some(path) => {
            write_atomic(path, &bytes)?;
            let manifest = RunManifest::new(
                command,
                config_text,
                seed,
                started.elapsed(),
                vec![OutputDigest {
                    path: PathBuf::from(path.file_name().unwrap_or_default()),
                    sha256: sha256_hex(&bytes),
                }],
            );
            manifest.write(&RunManifest::path_for(path))
        }
    }
}

fn read_points(path: &Path, dim: usize) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::InvalidParameter(format!("{other:?}")),
        })?;
    let mut coords = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) if row.len() == dim => coords.extend(row),
            Ok(row) => {
                return Err(Error::config(
                    "points",
                    format!("row {} has {} columns, expected {dim}", i + 1, row.len()),
                ))
            }
            // a non-numeric first row is a header
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::config("points", format!("row {}: {e}", i + 1))),
        }
    }
    PointSet::new(dim, coords)
}

/// Runs one parsed command.
pub fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    match cli.command {
        Command::Orders(args) => {
            let plan = args.raw_config()?.table1_plan()?;
            let rows = with_threads(args.threads, || run_table1(&plan))?;
            deliver(
                "orders",
                &args,
                plan_to_key_values(&plan),
                plan.base_seed,
                started,
                records_csv(&rows)?,
            )
        }
        Command::Convergence(args) => {
            let cfg = args.raw_config()?.experiment()?;
            let recs = with_threads(args.threads, || run_emae(&cfg))?;
            deliver(
                "convergence",
                &args,
                to_key_values(&cfg),
                cfg.base_seed,
                started,
                records_csv(&recs)?,
            )
        }
        Command::Probability(args) => {
            let cfg = args.raw_config()?.experiment()?;
            let rows = with_threads(args.threads, || run_probability(&cfg))?;
            deliver(
                "probability",
                &args,
                to_key_values(&cfg),
                cfg.base_seed,
                started,
                records_csv(&rows)?,
            )
        }
        Command::Eval { run, points } => {
            let raw = run.raw_config()?;
            let cfg = raw.experiment()?;
            let n = raw.eval_n(&cfg)?;
            let d = cfg.dim();
            let queries = read_points(&points, d)?;
            let centers = sample_centers(&cfg.law, &cfg.target.domain(), n, cfg.center_seed(n, 0))?;
            let values = centers.iter().map(|p| cfg.target.eval(p)).collect::<Result<Vec<_>>>()?;
            let q = QuasiInterpolant::build(centers, values, cfg.kernel, cfg.bandwidth(n))?;
            let reports = with_threads(run.threads, || q.evaluate_batch(&queries));
            let mut rows = Vec::with_capacity(reports.len());
            for (x, r) in queries.iter().zip(reports) {
                let report = match r {
                    Ok(r) => Some(r),
                    Err(Error::EmptyNeighborhood { nearest_distance }) => {
                        log::warn!("empty neighborhood at {x:?} (nearest center {nearest_distance})");
                        None
                    }
                    Err(e) => return Err(e),
                };
                rows.push(EvalRow { x: x.to_vec(), report }.fields());
            }
            let mut snapshot = to_key_values(&cfg);
            snapshot.push_str(&format!("n={n}\n"));
            deliver(
                "eval",
                &run,
                snapshot,
                cfg.base_seed,
                started,
                csv_bytes(&eval_header(d), rows)?,
            )
        }
        Command::Selftest => {
            let checks = selftest::run();
            let mut failed = 0;
            for c in &checks {
                println!("{} {:<40} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(Error::SelftestFailed(failed));
            }
            Ok(())
        }
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
