use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root is not bracketed: g({lo}) = {g_lo}, g({hi}) = {g_hi}")]
    BadBracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("quadrature did not reach the requested tolerance (estimate {estimate}, error {error})")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("infeasible starting value: {0}")]
    InfeasibleStart(String),

    #[error("optimizer did not settle after {restarts} restarts")]
    OptimFailure { restarts: usize },

    #[error("inspection time fell outside the simulated renewal cycles")]
    HorizonTooShort,

    #[error("{failed} of {reps} replications failed")]
    TooManyFailures { failed: usize, reps: usize },

    #[error("line {line}: {message}")]
    MalformedInput { line: u64, message: String },

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
