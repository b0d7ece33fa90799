use thiserror::Error;

/// Errors produced by the model evaluations and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The root-finding bracket does not enclose a sign change.
    #[error("no sign change on [{lo}, {hi}]: residual({lo}) = {f_lo:e}, residual({hi}) = {f_hi:e}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The iteration cap was hit or the converged point misses the residual tolerance.
    #[error("no convergence after {iterations} iterations (x = {x}, residual = {residual:e})")]
    Convergence { iterations: usize, x: f64, residual: f64 },

    /// A request violated a precondition (empty grid, bad parameter path, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
