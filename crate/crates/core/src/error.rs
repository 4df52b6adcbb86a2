use thiserror::Error;

/// Errors produced by the library. Every public fallible operation returns
/// [`Result`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller broke an operation precondition (dimension mismatch, zero
    /// vector, unverified input, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Input lies outside the mathematical domain of an operation (zero or
    /// repeated compression coordinate, composite modulus, d < 2, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The induced ball of a vector has zero radius.
    #[error("degenerate ball: gap is zero for {0}")]
    DegenerateBall(String),

    /// The compression line of a vector has a zero direction.
    #[error("degenerate line: direction is zero for {0}")]
    DegenerateLine(String),

    /// Two routes that must agree exactly did not.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
