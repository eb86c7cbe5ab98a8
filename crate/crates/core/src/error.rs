use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("undeclared variable `{name}` at {line}:{col}")]
    UndeclaredVariable {
        name: String,
        line: usize,
        col: usize,
    },

    #[error("invalid interval [{lower}, {upper}]: lower bound exceeds upper bound")]
    InvertedInterval { lower: String, upper: String },

    #[error("negative interval endpoint {0}")]
    NegativeEndpoint(String),

    #[error("invalid declaration for `{name}`: min {min} exceeds max {max}")]
    InvertedDeclaration {
        name: String,
        min: String,
        max: String,
    },

    #[error("cannot push negation through {0}")]
    NnfUnsupported(&'static str),

    #[error("formula is not in negation normal form ({0} node found)")]
    NonNnfInput(&'static str),

    #[error("division by an interval containing zero in predicate `{0}`")]
    DivisionByIntervalContainingZero(String),

    #[error("predicate `{0}` has no finite robustness bounds")]
    MissingBounds(String),

    #[error("instant {0} is not on the sample grid")]
    GridMismatch(String),

    #[error("empty input")]
    EmptyInput,

    #[error("trace has no samples")]
    EmptyTrace,

    #[error("time step must be positive, got {0}")]
    InvalidTimeStep(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(String),

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: non-finite value in column `{column}`")]
    NonFinite { row: usize, column: String },

    #[error("row {row}: time {found} does not match the grid value {expected}")]
    InconsistentTimeGrid {
        row: usize,
        expected: String,
        found: String,
    },

    #[error("state arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("trace has no column for variable `{0}`")]
    MissingColumn(String),

    #[error("window of {found} samples is shorter than the required {required}")]
    WindowTooShort { required: usize, found: usize },

    #[error("formula is not an always-rooted target specification: {0}")]
    NotTargetForm(String),

    #[error("unbounded interval needs an episode horizon")]
    UnboundedWithoutHorizon,

    #[error("smoothing parameter beta must be positive, got {0}")]
    InvalidBeta(String),
}
