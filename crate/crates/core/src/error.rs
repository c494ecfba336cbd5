use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation undefined (infinite): argument is zero")]
    ValuationOfZero,
    #[error("not a p-adic integer: denominator {denom} is divisible by p = {p}")]
    NotPAdicInteger { denom: String, p: u64 },
    #[error("mismatched primes: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("mismatched shapes: {0}")]
    ShapeMismatch(String),
    #[error("insufficient depth: need {needed}, have {depth}")]
    InsufficientDepth { needed: u32, depth: u32 },
    #[error("insufficient precision: need {needed} digits, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("comparison falls below the known precision: {0}")]
    BelowPrecision(String),
    #[error("below H_sigma threshold: {0}")]
    BelowThreshold(String),
    #[error("search budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no solution found: {0}")]
    NoSolution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
