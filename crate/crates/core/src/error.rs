use thiserror::Error;

use crate::rational::Q;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("series term {index} is negative")]
    NegativeTerm { index: usize },

    #[error("sequence decreases at index {index}")]
    NotIncreasing { index: usize },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(Q),

    #[error("still pending after the fuel budget: {0}")]
    Pending(String),

    #[error("domination violated at index {index}: u_i > v_i")]
    DominationViolated { index: usize },

    #[error("split invariant broken at step {step}: {detail}")]
    InvariantBroken { step: usize, detail: String },

    #[error("real {index} is not confined to [0,1]")]
    RealOutOfRange { index: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("cover length budget exceeded at item {index}: total {total} > budget {budget}")]
    LengthBudgetExceeded { index: usize, total: Q, budget: Q },

    #[error("interval ({left}, {right}) violates the density requirement")]
    DensityViolated { left: Q, right: Q },

    #[error("redundancy elimination failed to converge")]
    RedundancyLoopGuard,

    #[error("strategy overspent at step {index}: total delta {delta_total} >= epsilon {epsilon}")]
    StrategyOverspent {
        index: usize,
        delta_total: Q,
        epsilon: Q,
    },

    #[error("selected weight {sum} is not below epsilon {epsilon}")]
    WeightOverflow { sum: Q, epsilon: Q },

    #[error("negative paint increment for painter {painter} at stage {stage}")]
    NegativePaint { painter: usize, stage: u64 },

    #[error("programs {first:?} and {second:?} violate prefix-freeness")]
    PrefixFreeViolation { first: String, second: String },

    #[error("Kraft sum {0} exceeds 1")]
    KraftViolation(Q),

    #[error("approximation {index} exceeds the declared limit")]
    LimitInconsistent { index: usize },

    #[error("row {row} has non-zero terms outside its declared support")]
    RowNotFinite { row: usize },

    #[error("series sums do not match: {0}")]
    SumMismatch(String),

    #[error("sum-strategy ledger violated at prediction {prediction}: drop {drop} < delta/2 {half_delta}")]
    LedgerViolated {
        prediction: usize,
        drop: Q,
        half_delta: Q,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
