use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid milestones: {0}")]
    InvalidMilestones(String),

    #[error("no offset a <= {a_max} passed the eligibility check (checked x in {range})")]
    SearchFailure { a_max: u64, range: String },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid bound ordering: lower {lower} > upper {upper}")]
    BoundOrdering { lower: f64, upper: f64 },

    #[error("block {block} has coefficient at local index {index} beyond its size {size}")]
    BlockSupport { block: usize, index: u64, size: u64 },

    #[error("the delta sequence is not nondecreasing")]
    NotMonotone,

    #[error("exact arithmetic requires 1/p to be a positive integer (p = {0})")]
    Inexact(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn capacity(what: impl Into<String>) -> Error {
    Error::CapacityExceeded(what.into())
}
