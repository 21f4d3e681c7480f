//! Error types shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("precision exhausted at 2^-{cap} bits deciding `{lhs}` vs `{rhs}`")]
    PrecisionExhausted { cap: u32, lhs: String, rhs: String },
    #[error("division by a certified zero")]
    DivisionByZero,
    #[error("negative base `{value}` under a fractional power")]
    NegativeBase { value: String },
    #[error("exponent too large for certified evaluation: {0}")]
    ExponentOverflow(String),
    #[error("invalid weight vector: {0}")]
    BadWeights(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("enumeration budget exceeded after {examined} candidates (budget {budget})")]
    BudgetExceeded { examined: u64, budget: u64 },
    #[error("singular basis: no certifiably nonzero pivot in column {col}")]
    Singular { col: usize },
    #[error("nonpositive scale parameter: {0}")]
    NonPositiveScale(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Error)]
pub enum BestApproxError {
    #[error("degenerate instance: L({witness}) = 0, the group ^tA Z^m + Z^n has rank below m+n")]
    DegenerateRank { witness: String },
    #[error("enumeration budget exceeded after {examined} candidates (budget {budget})")]
    BudgetExceeded { examined: u64, budget: u64 },
    #[error("sequence too short: need at least {needed} entries, have {have}")]
    TooShort { needed: usize, have: usize },
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error)]
pub enum BadSetError {
    #[error("construction precondition failed: {0}")]
    Precondition(String),
    #[error("no surviving child at level {level}")]
    NoSurvivor { level: usize },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    BestApprox(#[from] BestApproxError),
}
