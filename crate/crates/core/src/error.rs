use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coin angle {theta} rad is within {tolerance} rad of an excluded value (0, pi/2, pi, 3pi/2)")]
    ExcludedAngle { theta: f64, tolerance: f64 },

    #[error("initial spinor has |alpha|^2 + |beta|^2 = {norm_sq}, expected 1")]
    NotNormalized { norm_sq: f64 },

    #[error("parameter `{0}` is not a finite number")]
    NonFinite(&'static str),

    #[error("requested time {requested} exceeds the configured cap {cap}")]
    TimeCap { requested: u64, cap: u64 },

    #[error("DFT grid of {n} points is too small for time {t}; need at least {required}")]
    GridTooSmall { n: usize, t: u64, required: usize },

    #[error("limit density is singular at x = {x} (the support edge)")]
    DensitySingular { x: f64 },

    #[error("internal consistency: probability {value} at x = {x} is negative beyond rounding")]
    NegativeProbability { x: i64, value: f64 },

    #[error("time {t} is not of the form 2*tau+1 or 2*tau+2 for tau = {tau}")]
    TimeNotAroundHalfTime { t: u64, tau: u64 },

    #[error("nothing to write: table is empty")]
    EmptyOutput,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
