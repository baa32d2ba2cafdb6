use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operator is not symmetric: entry ({row}, {col}) = {value} but transpose = {transpose}")]
    Asymmetric {
        row: usize,
        col: usize,
        value: f64,
        transpose: f64,
    },

    #[error("factorization broke down at pivot {index} (value {pivot:e})")]
    SingularPivot { index: usize, pivot: f64 },

    #[error("solver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("Frenet frame undefined at t = {t}: curvature {kappa:e}")]
    FrameUndefined { t: f64, kappa: f64 },

    #[error("ribbon tilt undefined at s = {s}: n₁ and b₁ both vanish")]
    TiltUndefined { s: f64 },

    #[error("grid too coarse: {nodes} interior nodes across, need {required}; use spacing <= {required_spacing}")]
    TooCoarse {
        nodes: usize,
        required: usize,
        required_spacing: f64,
    },

    #[error("problem has {unknowns} unknowns, cap is {cap}; try spacing >= {suggested_spacing}")]
    MemoryCap {
        unknowns: usize,
        cap: usize,
        suggested_spacing: f64,
    },

    #[error("grid function violates support: {0}")]
    SupportViolation(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
