//! CSV output and run manifests.
//!
//! CSV files have a header row, LF line endings and floats written with 17
//! significant digits (`{:.16e}`), which round-trips every double exactly.
//! Files are written through a temporary sibling and renamed into place.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{ErrorRecord, ProbabilityRow, Table1Row};
use crate::quasi::EvalReport;

/// Lossless decimal form of a double.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV row type.
pub trait CsvRecord {
    fn header() -> Vec<String>;
    fn fields(&self) -> Vec<String>;
}

impl CsvRecord for ErrorRecord {
    fn header() -> Vec<String> {
        ["n", "h", "emae", "stderr", "empty_rate"].map(String::from).to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format_f64(self.h),
            format_f64(self.emae),
            format_f64(self.stderr),
            format_f64(self.empty_neighborhood_rate),
        ]
    }
}

impl CsvRecord for ProbabilityRow {
    fn header() -> Vec<String> {
        ["n", "epsilon", "probability", "replications"]
            .map(String::from)
            .to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format_f64(self.epsilon),
            format_f64(self.probability),
            self.replications.to_string(),
        ]
    }
}

impl CsvRecord for Table1Row {
    fn header() -> Vec<String> {
        [
            "kernel",
            "d",
            "metric",
            "h_constant",
            "a_priori",
            "log_factor",
            "delta_hat",
            "k_hat",
            "residual_rms",
            "n_points",
            "max_empty_rate",
            "reference_a_priori",
            "reference_delta",
        ]
        .map(String::from)
        .to_vec()
    }

    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
        vec![
            self.kernel.clone(),
            self.d.to_string(),
            self.metric.to_string(),
            format_f64(self.h_constant),
            format_f64(self.a_priori),
            self.log_factor.to_string(),
            format_f64(self.delta_hat),
            format_f64(self.k_hat),
            format_f64(self.residual_rms),
            self.n_points.to_string(),
            format_f64(self.max_empty_rate),
            opt(self.reference_a_priori),
            opt(self.reference_delta),
        ]
    }
}

/// A query point with its evaluation outcome; failed points carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub x: Vec<f64>,
    pub report: Option<EvalReport>,
}

/// Header for `eval` output in dimension `d`.
pub fn eval_header(d: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=d).map(|i| format!("x_{i}")).collect();
    h.extend(["value", "denominator", "active_centers"].map(String::from));
    h
}

impl EvalRow {
    pub fn fields(&self) -> Vec<String> {
        let mut f: Vec<String> = self.x.iter().map(|v| format_f64(*v)).collect();
        match &self.report {
            Some(r) => {
                f.push(format_f64(r.value));
                f.push(format_f64(r.denominator));
                f.push(r.active_centers.to_string());
            }
            None => {
                f.push("NaN".into());
                f.push(format_f64(0.0));
                f.push("0".into());
            }
        }
        f
    }
}

/// Serializes a header and rows to CSV bytes.
pub fn csv_bytes(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

pub fn records_csv<R: CsvRecord>(records: &[R]) -> Result<Vec<u8>> {
    csv_bytes(&R::header(), records.iter().map(CsvRecord::fields))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to `path` via a temporary file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path.file_name().ok_or_else(|| {
        Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a file path"),
        )
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Writes CSV to `path` and returns its SHA-256 digest.
pub fn emit_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let bytes = csv_bytes(header, rows)?;
    write_atomic(path, &bytes)?;
    Ok(sha256_hex(&bytes))
}

/// Reads back a CSV file written by [`emit_csv`].
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::InvalidParameter(format!("{other:?}")),
        })?;
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to reproduce a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// `key=value` snapshot of the resolved configuration.
    pub config: String,
    pub version: String,
    pub base_seed: u64,
    pub duration_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command: &str, config: String, base_seed: u64, duration: Duration, outputs: Vec<OutputDigest>) -> Self {
        Self {
            command: command.to_string(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            base_seed,
            duration_seconds: duration.as_secs_f64(),
            outputs,
        }
    }

    /// `<output>.manifest.json` next to the primary output.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(".manifest.json");
        output.with_file_name(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_vec_pretty(self).expect("manifest serializes");
        json.push(b'\n');
        write_atomic(path, &json)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_slice(&bytes).map_err(|e| Error::config("manifest", e.to_string()))
    }
}
