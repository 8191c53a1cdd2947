use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("polynomial must have at least one coefficient")]
    EmptyPolynomial,

    #[error("degenerate polynomial: max |p| on [-1,1] is {0:e}")]
    DegeneratePolynomial(f64),

    #[error("parity violation: expected {expected}, coefficient {index} has magnitude {magnitude:e}")]
    Parity {
        expected: &'static str,
        index: usize,
        magnitude: f64,
    },

    #[error("max |P(z)| on the unit circle is {max_circle}, exceeds 1 - margin = {limit}")]
    NormViolation { max_circle: f64, limit: f64 },

    #[error("matrix is not unitary (defect {0:e})")]
    NonUnitary(f64),

    #[error("matrix is not Hermitian (defect {0:e})")]
    NonHermitian(f64),

    #[error("subnormalization {alpha} is below the spectral norm {norm}")]
    Subnormalization { alpha: f64, norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid encoding: {}", .0.join("; "))]
    InvalidEncoding(Vec<String>),

    #[error("eigenpair residual {residual:e} exceeds tolerance {tol:e}")]
    EigenpairResidual { residual: f64, tol: f64 },

    #[error("degenerate qubitized pair (gamma = {0}) has a single eigenvector")]
    DegeneratePair(f64),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("postselection success probability {0:e} is numerically zero")]
    ZeroProbability(f64),

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
