//! Error type shared by every operation of the model.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An identity statement was asked about an m-atom. The language has no
    /// such formula, so the query has no answer.
    #[error("ill-formed formula: {0}")]
    IllFormedFormula(String),

    #[error("no element of the universe is indistinguishable from {0}")]
    UniverseMiss(String),

    #[error("{0} is not a member of the qset")]
    NotAMember(String),

    #[error("the qset is empty")]
    EmptyQset,

    #[error("requested quasi-cardinal {requested} exceeds qc = {available}")]
    CardinalTooLarge { requested: u128, available: u128 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("nesting depth {depth} exceeds the maximum of {max}")]
    DepthExceeded { depth: usize, max: usize },

    #[error("not a pure weak singleton: {0}")]
    NotPure(String),

    #[error("malformed ordered pair: {0}")]
    MalformedPair(String),

    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),

    #[error("invalid name {0:?}")]
    InvalidName(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("zero count at offset {offset}")]
    CountZero { offset: usize },
}
