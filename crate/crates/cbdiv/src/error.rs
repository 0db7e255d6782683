use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("coordinate length {got} does not match rank {rank}")]
    RankMismatch { got: usize, rank: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("weight {weight:?} has level {level}, exceeding the bound {max}")]
    LevelExceeded {
        weight: Vec<i64>,
        level: i64,
        max: i64,
    },
    #[error("marked-point count mismatch: {0} vs {1}")]
    PointCountMismatch(usize, usize),
    #[error("at least 4 marked points required, got {0}")]
    TooFewPoints(usize),
    #[error("invalid boundary side: {0}")]
    InvalidBoundary(String),
    #[error("branching rule inconsistency: {0}")]
    BranchingInconsistency(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
