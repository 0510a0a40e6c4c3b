use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point {re}+{im}i lies outside the strip 0 <= Re z <= 1")]
    OutsideStrip { re: f64, im: f64 },

    #[error("floating-point range exhausted: {0}")]
    Range(String),

    #[error("certification impossible: {samples} samples do not exceed pi*N for degree {degree}")]
    Certification { degree: usize, samples: usize },

    #[error("degree {degree} overflows boundary moduli; feasible degrees are 0..={max_degree}")]
    DegreeOverflow { degree: usize, max_degree: usize },

    #[error("no convergence within {iterations} iterations (best value {best})")]
    NoConvergence { iterations: usize, best: f64 },

    #[error("truncation tolerance {tol:e} unreachable within K <= {budget}")]
    TruncationBudget { tol: f64, budget: usize },

    #[error("non-finite gradient at iteration {iteration} (temperature {temperature:e})")]
    NonFiniteGradient { iteration: usize, temperature: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
