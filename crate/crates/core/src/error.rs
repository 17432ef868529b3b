use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("cannot parse '{input}': {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizerGroup(String),

    #[error("no qubit permutation realizes the requested logical action on {0}")]
    NoPermutation(String),

    #[error("gadget requires a {expected} block, got {found}")]
    WrongCode { expected: String, found: String },

    #[error("invalid operand: {0}")]
    InvalidOperand(String),

    #[error("malformed circuit document at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("circuit failed validation: {0}")]
    InvalidCircuit(String),

    #[error("{required} qubits exceed the simulator capacity of {cap}")]
    Capacity { required: usize, cap: usize },

    #[error("gadget precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported gate: {0}")]
    Unsupported(String),

    #[error("ancilla budget exceeded: {0}")]
    AncillaBudget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
