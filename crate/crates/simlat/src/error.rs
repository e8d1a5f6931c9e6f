//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("enumeration budget exceeded after {nodes} nodes ({context})")]
    BudgetExceeded { nodes: u64, context: String },
    #[error("factorization failed: budget exhausted on {0}")]
    FactorizationFailed(String),
    #[error("unknown lattice: {0}")]
    UnknownLattice(String),
    #[error("catalog validation failed: {0}")]
    CatalogInvalid(String),
    #[error("map does not stabilize the target lattice: {0}")]
    NotStabilizing(String),
    #[error("no representation found: {0}")]
    NoRepresentation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
