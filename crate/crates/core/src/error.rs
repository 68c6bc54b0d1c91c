use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid hypothesis: {0}")]
    InvalidHypothesis(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no feasible radius in window [{floor:e}, {r_search_max:e}]: {reason}")]
    InfeasibleWindow {
        floor: f64,
        r_search_max: f64,
        reason: String,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("sign condition violated at r = {radius:e}: {reason}")]
    Sign { radius: f64, reason: String },

    #[error("singular tridiagonal system (pivot {pivot:e} at row {row})")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("barrier pieces disagree at r = {r_glue:e} (mismatch {mismatch:e})")]
    Continuity { r_glue: f64, mismatch: f64 },

    #[error(
        "gluing at r = {r_glue:e} leaves a concave kink (derivative jump {jump:e}); enlarge r_glue"
    )]
    InvalidGluing { r_glue: f64, jump: f64 },

    #[error("barrier construction failed at r = {radius:e}: {reason}")]
    Construction { radius: f64, reason: String },

    #[error("monotone iteration did not converge after {iterations} iterations (last change {last_change:e})")]
    NonConvergence {
        iterations: usize,
        last_change: f64,
        trace: Vec<f64>,
    },

    #[error(
        "iterate {iteration} dropped below the lower solution by {deficit:e} at r = {radius:e}"
    )]
    InvalidBarrier {
        iteration: usize,
        radius: f64,
        deficit: f64,
    },

    #[error("exhaustion ball {index} failed: {source}")]
    Exhaustion {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("singular metric: {0}")]
    SingularMetric(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
