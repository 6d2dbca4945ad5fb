use thiserror::Error;

use crate::ratmat::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("entry ({row},{col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: Rational },
    #[error("row {row} sum {sum} > 1")]
    RowSumExceeded { row: usize, sum: Rational },
    #[error("column {col} sum {sum} > 1")]
    ColumnSumExceeded { col: usize, sum: Rational },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),
    #[error("alpha {0} outside [0,1]")]
    AlphaOutOfRange(Rational),
    #[error("order {order} exceeds the configured limit {limit}")]
    LimitExceeded { order: usize, limit: usize },
    #[error("pivot ({row},{col}) references a finished line")]
    FinishedPivot { row: usize, col: usize },
    #[error("pivot ({row},{col}) is out of range")]
    PivotOutOfRange { row: usize, col: usize },
    #[error("pivot list exhausted before the construction completed")]
    PivotsExhausted,
    #[error("not a cycle of the support graph: {0}")]
    NotACycle(String),
    #[error("path cannot split the matrix: {0}")]
    InvalidPath(String),
    #[error("matrix is not an extreme point with fractional sum: {0}")]
    NotFractionalExtreme(String),
    #[error("sub-defects differ: {0} vs {1}")]
    SubDefectMismatch(usize, usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
