use thiserror::Error;

/// Errors raised by design construction, evaluation and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("entry {value} at row {row}, column {col} is not a valid level for {levels} levels")]
    InvalidLevel {
        row: usize,
        col: usize,
        value: f64,
        levels: usize,
    },

    #[error("entry {value} at row {row}, column {col} is outside [0, 1)")]
    OutOfUnitCube { row: usize, col: usize, value: f64 },

    #[error("column {column} has zero variance")]
    ZeroVariance { column: usize },

    #[error("degenerate input: column {column} is linearly dependent on earlier columns")]
    DegenerateInput { column: usize },

    #[error("coincident points {first} and {second} give infinite energy")]
    InfiniteEnergy { first: usize, second: usize },

    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("strength violation: {0}")]
    StrengthViolation(String),

    #[error("orthogonal array not compatible: {0}")]
    IncompatibleArray(String),

    #[error("order {0} is not reachable by the implemented constructions")]
    UnsupportedOrder(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
