use alloc::vec::Vec;

use thiserror::Error;

/// Errors produced by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register of {requested} qubits exceeds the dense limit of {limit}")]
    Capacity { requested: usize, limit: usize },
    #[error("a register needs at least one qubit")]
    EmptyRegister,
    #[error("qubit {index} is out of range for a {n_qubits}-qubit register (indices are 1-based)")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("qubit subset is empty")]
    EmptySubset,
    #[error("CNOT control and target are both qubit {0}")]
    CnotSameQubit(usize),
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(&'static str),
    #[error("dipolar coupling must be positive and finite, got {0}")]
    InvalidCoupling(f64),
    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("probability {0} lies outside [0, 1]")]
    InvalidProbability(f64),
    #[error("measured frequencies ({a1}, {a2}) are out of range")]
    FrequencyOutOfRange { a1: f64, a2: f64 },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("histogram covers qubits {found:?}, expected {expected:?}")]
    WrongSubset {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("histogram has no shots or inconsistent counts")]
    InconsistentHistogram,
    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
