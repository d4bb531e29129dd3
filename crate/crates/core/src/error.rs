use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid bandwidth h = {0}; h must be finite and positive")]
    InvalidBandwidth(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quasi-interpolant needs at least one center")]
    EmptyCenters,

    #[error("length mismatch: {centers} centers but {values} values")]
    LengthMismatch { centers: usize, values: usize },

    /// Every center lies outside the kernel support around the query.
    #[error("empty neighborhood: no center within the kernel support (nearest center at distance {nearest_distance})")]
    EmptyNeighborhood { nearest_distance: f64 },

    #[error("point {point:?} lies outside the domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("pathological sampling law: acceptance probability {acceptance:e} is below the rejection threshold")]
    PathologicalLaw { acceptance: f64 },

    #[error("degenerate measure: kernel denominator integral {denominator:e} is below 1e-12")]
    DegenerateMeasure { denominator: f64 },

    #[error("log-linear fit failed: {0}")]
    Fit(String),

    #[error("experiment aborted at n = {n}: empty-neighborhood rate {rate:.3} exceeds {limit:.3}; increase the bandwidth constant")]
    ExperimentAborted { n: usize, rate: f64, limit: f64 },

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} selftest check(s) failed")]
    SelftestFailed(usize),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 1 failed selftest, 2 configuration, 3 experiment abort, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SelftestFailed(_) => 1,
            Error::Io { .. } | Error::Csv(_) => 4,
            Error::EmptyNeighborhood { .. }
            | Error::PathologicalLaw { .. }
            | Error::DegenerateMeasure { .. }
            | Error::Fit(_)
            | Error::ExperimentAborted { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
