use thiserror::Error;

use crate::tree::TreeViolation;

/// Errors raised by the library. Branch and coordinate indices are stored
/// 0-based and printed 1-based; levels are 1-based throughout.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("entry {index} of the sequence is zero")]
    ZeroEntry { index: usize },

    #[error("not an Arf multiplicity sequence: no run of following entries sums to m_{index}")]
    NotArfSequence { index: usize },

    #[error("padded length {requested} is shorter than required minimum {minimum}")]
    PaddingTooShort { requested: usize, minimum: usize },

    #[error("malformed S-vector at index {index}: {reason}")]
    MalformedSVector { index: usize, reason: &'static str },

    #[error("gcd of the values is {gcd}, not 1")]
    GcdNotOne { gcd: u64 },

    #[error("gcd of coordinate {} is {gcd}, not 1", coordinate + 1)]
    CoordinateGcdNotOne { coordinate: usize, gcd: u64 },

    #[error("coordinates {} and {} agree on every vector", i + 1, j + 1)]
    IndistinguishablePair { i: usize, j: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector entries must be positive (coordinate {})", coordinate + 1)]
    NonPositiveEntry { coordinate: usize },

    #[error("level {level} at position {} exceeds the bound {bound}", index + 1)]
    LevelExceedsBound { index: usize, level: usize, bound: usize },

    #[error("branches {} and {} share a multiplicity sequence", i + 1, j + 1)]
    UnboundedPair { i: usize, j: usize },

    #[error("branches {} and {} share a multiplicity sequence: infinitely many trees", i + 1, j + 1)]
    InfiniteFamily { i: usize, j: usize },

    #[error("invalid tree matrix: {0}")]
    InvalidMatrix(TreeViolation),

    #[error("{value} is not a partial sum of branch {}", coordinate + 1)]
    NotInProjection { coordinate: usize, value: u64 },

    #[error("malformed small-elements set: {0}")]
    MalformedSmallSet(String),

    #[error("index at coordinate {} is out of range", coordinate + 1)]
    IndexOutOfRange { coordinate: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
