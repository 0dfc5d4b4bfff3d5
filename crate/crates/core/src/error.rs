use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number {0}: 2s must be a nonnegative integer")]
    InvalidSpin(f64),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("observable {label} is not a dichotomic involution (max deviation {deviation:e})")]
    NotInvolution { label: String, deviation: f64 },
    #[error("observables {0} and {1} do not commute")]
    NonCommuting(String, String),
    #[error("empty measurement context")]
    EmptyContext,
    #[error("unknown observable label {0:?}")]
    UnknownLabel(String),
    #[error("axis must have unit norm, got norm {0}")]
    InvalidAxis(f64),
    #[error("invalid S_z outcome {0}")]
    InvalidSzOutcome(f64),
    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),
    #[error("joint outcome probabilities sum to {0}, expected 1")]
    Unnormalized(f64),
    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
