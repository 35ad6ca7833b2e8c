use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("negative value for {what}")]
    NonNegativityViolation { what: String },

    #[error("agent {agent} has zero total cost and normalization was requested")]
    ZeroTotalCost { agent: usize },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumMismatch { sum: Rational },

    #[error("instance shape mismatch: {0}")]
    DimensionMismatch(String),

    #[error("allocation does not fit instance: {0}")]
    IncompatibleDimensions(String),

    #[error("item {item} is not in the bundle of agent {agent}")]
    FirstItemNotInBundle { agent: usize, item: usize },

    #[error("{what} exceeds budget {budget}")]
    BudgetExceeded { what: String, budget: u64 },

    #[error("search cancelled")]
    Cancelled,

    #[error("instance is not identically ordered (row {agent} increases at item {item})")]
    NotIdo { agent: usize, item: usize },

    #[error("agent {agent} has zero share but was placed in the round-robin group")]
    ZeroShareInN2 { agent: usize },

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("optimal social cost is zero")]
    ZeroOpt,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
