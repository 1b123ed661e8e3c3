//! The play engine and its instrumentation.
//!
//! Replicas are independent: replica `r` of a run with master seed `s`
//! draws Player 1's strategy bits, the opponent's bits and the absorption
//! lottery from three separate derived streams, so every transcript is a
//! pure function of `(configuration, seed)`.

mod batch;
mod dp;
mod engine;
mod rng;
mod stats;
mod tails;

pub use batch::{run_batch, ReplicaStats, SimConfig, SimReport};
pub use dp::{
    exact_stop_dp, exact_stop_dp_big_match, verify_base_lemma, verify_base_lemma_big_match,
    BigMatchDp, GeneralizedDp, LemmaRanges, LemmaViolation, DEFAULT_DP_CAP,
};
pub use engine::{run_play, PlaySetup, RecordFlags};
pub use rng::{derive_stream, pow_bounds, CompiledProb, FairBits, SplitMix64};
pub use stats::{subepoch_stats, SubEpochRecord, SubEpochStats};
pub use tails::{chernoff_lower, chernoff_upper, exp_neg_upper, hoeffding};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("word length {len} exceeds the configured cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("the required record flag was not set for this run")]
    NotRecorded,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("strategy contract violation: {0}")]
    StrategyContractViolation(String),
}
