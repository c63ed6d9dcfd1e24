use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix of size {rows}x{cols} has odd or non-square shape, expected 2n x 2n")]
    NotEvenSquare { rows: usize, cols: usize },

    #[error("diagonal entry ({index},{index}) = {value} is not a unit of the coefficient ring")]
    NonUnitDiagonal { index: usize, value: String },

    #[error("matrix is not {0}")]
    ShapeViolation(String),

    #[error("diagonal entry {index} is not a constant")]
    NonConstantDiagonal { index: usize },

    #[error("diagonal entries {first} and {second} coincide")]
    RepeatedEigenvalue { first: usize, second: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("target matrix is not symplectic")]
    NotSymplectic,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("polynomial entries must be evaluated at a point first")]
    PolynomialEntries,

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("the zero vector has no stratum")]
    ZeroVector,

    #[error("substitution cycle: {0}")]
    SubstitutionCycle(String),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, column, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
