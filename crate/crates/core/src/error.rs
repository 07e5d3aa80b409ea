use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("variable {var} out of range (formula has {num_vars} variables)")]
    VariableOutOfRange { var: i64, num_vars: usize },

    #[error("empty clause")]
    EmptyClause,

    #[error("assignment has {got} bits but the formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{num_vars} variables exceed the enumeration limit of {limit}")]
    EnumerationLimit { num_vars: usize, limit: usize },

    #[error("formula is unsatisfiable")]
    Unsatisfiable,

    #[error("variable {var} has weights summing to zero")]
    ZeroWeightSum { var: usize },

    #[error("invalid weight for variable {var}: {message}")]
    InvalidWeight { var: usize, message: String },

    #[error("{requested} qubits requested, supported range is {min}..={max}")]
    QubitCount {
        requested: usize,
        min: usize,
        max: usize,
    },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} used more than once")]
    DuplicateQubit(usize),

    #[error("{clauses} clauses exceed the ancilla budget of {budget}")]
    AncillaBudget { clauses: usize, budget: usize },

    #[error("register size mismatch: expected {expected} qubits, got {got}")]
    RegisterMismatch { expected: usize, got: usize },

    #[error("minimum world weight is zero; iteration cap is undefined")]
    DegenerateMinWeight,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
