use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian")]
    NonHermitianInput,

    #[error("constraints of {spec} could not be satisfied after {rounds} rejection rounds")]
    ConstraintUnsatisfiable { spec: String, rounds: usize },

    /// Rows are 1-based, matching the row numbering of the orthogonal matrices.
    #[error("rows {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("rows {0} and {1} are identical product vectors")]
    DuplicateRows(usize, usize),

    #[error("row index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("set of {rows} vectors does not fit in dimension {dim}")]
    SetTooLarge { rows: usize, dim: usize },

    #[error("invalid party subset: {0}")]
    BadSubset(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("invalid split: {0}")]
    BadSplit(String),

    #[error("search needs {assignments} assignments, over the budget of {budget}; pass force to run anyway")]
    BudgetExceeded { assignments: f64, budget: f64 },

    #[error("bad arity: need p >= 2n >= 2, got p = {p}, n = {n}")]
    BadArity { p: u32, n: u32 },

    #[error("brute force limited to p <= {limit}, got p = {p}")]
    TooLarge { p: u32, limit: u32 },

    #[error("expected an 8-row 4-qubit set, got {rows} rows on {qubits} qubits")]
    WrongShape { rows: usize, qubits: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("unknown UOM {0:?}")]
    UnknownUom(String),
}

pub type Result<T> = std::result::Result<T, Error>;
