//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid too small for {op}: needs at least {needed} nodes per axis, got {got}")]
    GridTooSmall {
        op: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("field/grid mismatch: {0}")]
    Mismatch(String),

    #[error("value out of range at node {index}: f = {value:e}, allowed [{lo:e}, {hi:e}]")]
    OutOfRange {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("non-finite value at node {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("{op} does not support {kind} grids")]
    UnsupportedGrid { op: &'static str, kind: String },

    #[error("time step {dt:e} exceeds stability bound {bound:e}")]
    TimeStepTooLarge { dt: f64, bound: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Counterexample or root search exhausted its range. The trace carries
    /// the (parameter, discriminant) pairs visited so failures are diagnosable.
    #[error("search failed: {reason}")]
    SearchFailed {
        reason: String,
        trace: Vec<(f64, f64)>,
    },

    #[error("bracketing failed: {0}")]
    Bracket(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code class for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Grid(_)
            | Error::GridTooSmall { .. }
            | Error::Param(_)
            | Error::Mismatch(_)
            | Error::UnsupportedGrid { .. }
            | Error::Config(_)
            | Error::Bracket(_) => 2,
            Error::OutOfRange { .. }
            | Error::NonFinite { .. }
            | Error::TimeStepTooLarge { .. }
            | Error::Numerical(_)
            | Error::Io(_) => 3,
            Error::SearchFailed { .. } => 4,
        }
    }
}
