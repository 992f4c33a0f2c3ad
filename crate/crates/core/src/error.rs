use alloc::string::String;

/// Errors reported by the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e} (relative)")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse: h = {h} exceeds {limit}")]
    GridTooCoarse { h: f64, limit: f64 },
    #[error("ODE step size underflow, last good x = {x}")]
    StepUnderflow { x: f64 },
    #[error("unsupported hypergeometric regime: {0}")]
    UnsupportedRegime(String),
    #[error("seed {index} does not solve the stationary equation: residual {residual:e} at x = {x}")]
    SeedResidual { index: usize, x: f64, residual: f64 },
    #[error("singular transformation: det U vanishes near x = {x}")]
    SingularTransform { x: f64 },
    #[error("node in {what} near x = {x}")]
    Node { what: &'static str, x: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no propagating channel at E = {energy}")]
    NoPropagatingChannel { energy: f64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;
