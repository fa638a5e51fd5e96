use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A computation would exceed a configured resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The instance is satisfiable where an unsatisfiable one is required.
    #[error("instance is satisfiable")]
    Satisfiable,

    #[error("parameters outside the supported domain: {0}")]
    UnsupportedDomain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("undefined phase point: no 2- or 3-clauses left")]
    UndefinedPoint,

    /// Integration or root finding failed; `residual` reports the last
    /// achieved accuracy where meaningful.
    #[error("numeric failure: {msg} (t = {t}, residual = {residual:e})")]
    Numeric { msg: String, t: f64, residual: f64 },

    #[error("trajectory never crosses the critical line")]
    NoCrossing,

    /// The branch-splitting rate stays positive: the tree never halts
    /// before `t_max`.
    #[error("no halt before t = {t_max} (minimum splitting rate {min_rate:e})")]
    NoHalt { t_max: f64, min_rate: f64 },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn numeric(msg: impl Into<String>, t: f64, residual: f64) -> Self {
        Error::Numeric { msg: msg.into(), t, residual }
    }
}
