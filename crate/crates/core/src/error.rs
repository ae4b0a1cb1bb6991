use thiserror::Error;

use crate::quadrature::QuadratureError;

/// Crate-wide error type.
///
/// Numerical payloads are stored as `f64` regardless of the scalar type the
/// failing computation ran with.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter for {kind}: {message}")]
    InvalidParameter { kind: &'static str, message: String },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{0} is not available for an empirical distribution")]
    Capability(&'static str),

    #[error("ingestion error at line {line}: {message}")]
    Ingestion { line: usize, message: String },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    #[error("{what} did not converge (best estimate {best_estimate}, error estimate {error_estimate})")]
    NotConverged {
        what: String,
        best_estimate: f64,
        error_estimate: f64,
    },

    #[error("moment of order {order} is undefined for {kind}")]
    MomentUndefined { kind: String, order: u32 },

    #[error("degenerate law: {0}")]
    Degenerate(String),

    #[error("support of {0} extends below zero; cumulative entropies are defined on (0, +inf)")]
    NegativeSupport(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
