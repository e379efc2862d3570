//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// CSV header does not match the expected Yahoo-Finance layout.
    #[error("invalid csv header: expected `{expected}`, got `{found}`")]
    InvalidHeader { expected: &'static str, found: String },

    /// Fewer than two usable rows survived parsing.
    #[error("too few valid data rows: {0} (a price series needs at least 2)")]
    TooFewRows(usize),

    /// Dates in the file are not strictly increasing.
    #[error("non-monotone dates at row {row}: `{prev}` is not before `{next}`")]
    NonMonotoneDates {
        row: usize,
        prev: String,
        next: String,
    },

    /// A date field is not `YYYY-MM-DD`.
    #[error("invalid date `{0}`: expected YYYY-MM-DD")]
    InvalidDate(String),

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A rule name that is not one of the thirteen known rules.
    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    /// Lookup into the bundled reference tables with an unknown key.
    #[error("unknown reference key: table={table} rule={rule} index={index}")]
    UnknownReferenceKey {
        table: String,
        rule: String,
        index: String,
    },

    /// The embedded reference fixture does not hash to its pinned checksum.
    #[error("reference fixture checksum mismatch: expected {expected:#018x}, got {got:#018x}")]
    ChecksumMismatch { expected: u64, got: u64 },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
