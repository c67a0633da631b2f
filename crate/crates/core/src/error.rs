use thiserror::Error;

/// Errors produced by the tropical geometry routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) must be finite")]
    NonFinite { row: usize, col: usize },

    #[error("entry ({row}, {col}) must be an integer")]
    NonInteger { row: usize, col: usize },

    #[error("type entry S_{0} is empty")]
    EmptyTypeEntry(usize),

    #[error("negative cycle {} of weight {weight}", one_based(.cycle))]
    NegativeCycle { cycle: Vec<usize>, weight: String },

    #[error("matrix has no finite cycle")]
    NoCycle,

    #[error("no permutation of finite weight")]
    NoFinitePermanent,

    #[error("cell is unbounded")]
    Unbounded,

    #[error("invalid representative set: {0}")]
    InvalidRepresentatives(String),

    #[error("work budget exceeded: {required} operations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("integer overflow in scaled arithmetic")]
    Overflow,

    #[error("precision exhausted at {bits} bits: {what}")]
    Inconclusive { bits: u32, what: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed formula: {0}")]
    MalformedFormula(String),
}

fn one_based(cycle: &[usize]) -> String {
    let parts: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(" → "))
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
