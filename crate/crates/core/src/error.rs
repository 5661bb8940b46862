use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("order {n} exceeds the supported maximum {max}")]
    Order { n: usize, max: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("cannot parse state '{input}': {reason}")]
    StateSyntax { input: String, reason: String },

    #[error("unsupported state for this operation: {0}")]
    Unsupported(String),

    #[error("degenerate normalization: 1 + cos(2 p0 q0) exp(-q0^2) = {radicand} <= 0")]
    Degenerate { radicand: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle resolution too coarse: imaginary residual {residual:e} exceeds {limit:e}")]
    Resolution { residual: f64, limit: f64 },

    #[error(
        "quadrature did not converge after {refinements} refinements: last change {last_change:e} > tolerance {tolerance:e}"
    )]
    NotConverged {
        refinements: usize,
        last_change: f64,
        tolerance: f64,
    },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("{context}: {source}")]
    Io {
        context: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported output format: {0}")]
    Format(String),

    #[error("{0}")]
    Usage(String),
}
