use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QoscError {
    #[error("deformation parameter q = {0} must lie in the open interval (0, 1)")]
    InvalidQ(f64),

    #[error("|x| = {modulus} lies outside the series domain |x| < {radius}")]
    Domain { modulus: f64, radius: f64 },

    #[error("q-exponential product has a pole: factor {index} denominator is {denominator:e}")]
    Pole { index: usize, denominator: f64 },

    #[error("{what} did not converge within {terms} terms")]
    Convergence { what: &'static str, terms: usize },

    #[error("mode {mode} out of range 1..={max}")]
    ModeOutOfRange { mode: usize, max: usize },

    #[error("occupation {occupation} of mode {mode} exceeds cutoff {cutoff}")]
    OutsideCutoff {
        mode: usize,
        occupation: usize,
        cutoff: usize,
    },

    #[error("multi-index has {got} entries, space has {expected} modes")]
    ModeCount { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sector margin {margin} is insufficient, {required} required")]
    MarginInsufficient { margin: usize, required: usize },

    #[error("cutoff {cutoff} too small: dropped tail norm^2 bound {tail_bound:e} exceeds {limit:e}")]
    InsufficientCutoff {
        cutoff: usize,
        tail_bound: f64,
        limit: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function evaluation failed at x = {x}: {reason}")]
    Evaluation { x: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, QoscError>;
