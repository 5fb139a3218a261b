use thiserror::Error;

/// Errors raised by the kicked-top library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin quantum number {0} is not a positive half-integer")]
    InvalidSpin(f64),

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state norm deviates from 1 by {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not unitary: |U^dag U - I|_F = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("matrix is not Hermitian: max |A - A^dag| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("matrix has trace {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("qubit register of {qubits} qubits exceeds the limit of {limit}")]
    SizeLimit { qubits: usize, limit: usize },

    #[error("can only keep 1 or 2 qubits of a {qubits}-qubit state, requested {keep}")]
    InvalidKeep { keep: usize, qubits: usize },

    #[error("time series is empty")]
    EmptySeries,

    #[error("point ({x}, {y}, {z}) is off the unit sphere by {deviation:e}")]
    OffSphere { x: f64, y: f64, z: f64, deviation: f64 },

    #[error("readout model is singular for qubit {qubit}: f0 + f1 - 1 = {determinant}")]
    SingularReadout { qubit: usize, determinant: f64 },

    #[error("missing Pauli expectation for label {0}")]
    MissingLabel(String),

    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),

    #[error("expectation value {value} for {label} exceeds 1 in magnitude")]
    ExpectationOutOfRange { label: String, value: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
