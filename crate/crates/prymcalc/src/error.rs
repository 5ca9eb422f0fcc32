use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("{gen} is not a generator of {space}")]
    InvalidGenerator { gen: String, space: String },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{gen} is outside the domain of {map}{detail}")]
    OutOfDomain { map: String, gen: String, detail: String },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("not a divisor: {0}")]
    NotADivisor(String),

    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),

    #[error("catalog schema error at {path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("coefficient of {gen} is not exact ({context})")]
    Inexact { gen: String, context: String },

    #[error("negative coefficient: {0}")]
    NegativeCoefficient(String),

    #[error("underdetermined system: rank {rank} for {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("no age table row for {0}")]
    InvalidRow(String),

    #[error("invalid curve sketch: {0}")]
    Sketch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
