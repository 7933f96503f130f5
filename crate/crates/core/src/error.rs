use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("singular transformation: {0}")]
    Singular(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bracketing failed: {0}")]
    Bracket(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("integration terminated at omega = {at}: {reason}")]
    Integration { at: f64, reason: String },

    #[error("evolution aborted at t = {t}: {reason}")]
    Evolution { t: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
