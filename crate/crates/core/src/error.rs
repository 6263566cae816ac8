use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids (L={0}, n={1}) vs (L={2}, n={3})")]
    GridMismatch(f64, usize, f64, usize),

    #[error("invalid soliton parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{op}: order {order} not supported")]
    UnsupportedOrder { op: &'static str, order: usize },

    #[error("{what} is singular or numerically rank deficient")]
    Singular { what: String },

    #[error("{what}: condition estimate {cond:.3e} exceeds limit")]
    IllConditioned { what: String, cond: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(String),

    #[error("hessian probe cross-check failed: relative error {rel_err:.3e} on probe {probe}")]
    HessianProbe { probe: usize, rel_err: f64 },

    #[error("zero-tolerance calibration failed: {0}")]
    Calibration(String),

    #[error("negative eigenvalue count {found} does not match expected {expected}")]
    InertiaMismatch { found: usize, expected: usize },

    #[error("solution blow-up detected at t={t:.6}: max amplitude {amp:.3e}")]
    BlowUp { t: f64, amp: f64 },

    #[error("eigen decomposition failed: {0}")]
    Eigen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
