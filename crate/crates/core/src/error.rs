use alloc::string::String;

/// Errors raised by grid construction, convolution and Boehmian verification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid mismatch: operands live on different grids")]
    GridMismatch,

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The convolution result carries non-negligible mass outside the window.
    #[error("window overflow: {mass:e} of mass falls outside the grid, result needs [{needed_lo}, {needed_hi}]")]
    WindowOverflow { mass: f64, needed_lo: f64, needed_hi: f64 },

    /// A delta-sequence term is narrower than two grid steps.
    #[error("resolution error: term n={n} has radius {radius} below twice the grid step {step}")]
    Resolution { n: usize, radius: f64, step: f64 },

    #[error("quotient condition violated at (m={m}, n={n}): residual {residual:e} > {tolerance:e}")]
    QuotientViolation {
        m: usize,
        n: usize,
        residual: f64,
        tolerance: f64,
    },

    /// No denominator term has `|𝓒(δₖ)(t)| ≥ c_min` within the check window.
    #[error(
        "cannot evaluate at t={t}: no k ≤ {window} with |C(delta_k)(t)| >= c_min; k >= {required_k} is sufficient"
    )]
    Evaluation { t: f64, window: usize, required_k: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
