use thiserror::Error;

/// Errors raised while building or analysing finite monoids.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is empty")]
    EmptyTable,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("entry {value} at ({row}, {col}) is out of range for a table of size {size}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },

    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("no identity element")]
    NoIdentity,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("element {0} is not a unit")]
    NotAUnit(usize),

    #[error("element {0} is not cancellative")]
    NotCancellative(usize),

    #[error("unknown monoid name `{0}`")]
    UnknownName(String),

    #[error("size limit exceeded: {what} would need {required}, limit is {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        required: usize,
        limit: usize,
    },

    #[error("isomorphism search gave up after {nodes} nodes")]
    SearchBudgetExceeded { nodes: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("not an isomorphism: {0}")]
    InvalidWitness(String),

    #[error("image of {{1, {element}}} has {size} elements")]
    TwoToTwoViolation { element: usize, size: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
