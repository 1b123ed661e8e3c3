//! Memory-based Player 1 strategies.
//!
//! A strategy is a starting state plus an action map and a stochastic
//! update map over a countable state space numbered by naturals. The
//! distribution-returning methods are the exactness-auditable interface;
//! `sample_action`/`advance` are the allocation-free paths the play engine
//! drives, with matching semantics.

mod base;
mod dist;
mod full;
mod lifted;
mod numbering;
mod patience;
mod schedule;
mod spec;
mod stationary;

pub use base::{kohlberg_classic, zigzag_decode, zigzag_encode, BaseStrategy};
pub use dist::Dist;
pub use full::{full_strategy, max_exponent, observer_variant, FullState, FullStrategy, SampleMode};
pub use lifted::{lifted_strategy, LiftedState, LiftedStrategy};
pub use numbering::StateNumbering;
pub use patience::{epoch_block_codes, epoch_patience_closed_form, patience, Patience};
pub use schedule::EpochSchedule;
pub use spec::{parse_p1_spec, ScheduleSpec, StrategySpec};
pub use stationary::StationaryStrategy;

use crate::numeric::Rational;
use crate::sim::FairBits;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("schedule error: {0}")]
    ScheduleError(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("empty range")]
    EmptyRange,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("state {0} does not decode")]
    InvalidState(u128),
    #[error("bad strategy spec: {0}")]
    BadSpec(String),
}

/// A memory-based strategy for Player 1.
pub trait MemoryStrategy {
    type State: Clone + std::fmt::Debug;

    fn start_state(&self) -> Self::State;

    /// Number of own actions (rows) and opponent actions (columns).
    fn own_actions(&self) -> usize;
    fn opp_actions(&self) -> usize;

    /// Exact action distribution at a memory state.
    fn action_dist(&self, state: &Self::State) -> Dist<usize>;

    /// Exact update distribution after observing `(own, opp)`. The
    /// strategies built here ignore `own`, but the interface carries it.
    fn update_dist(&self, own: usize, opp: usize, state: &Self::State) -> Dist<Self::State>;

    fn deterministic_update(&self) -> bool {
        false
    }

    /// Natural-number code of a state, saturating at `u128::MAX`.
    fn state_code(&self, state: &Self::State) -> u128;

    /// Inverse of `state_code` on the codomain of reachable states.
    fn decode_state(&self, code: u128) -> Option<Self::State>;

    /// Fast sampling path; must agree in distribution with `action_dist`.
    fn sample_action(&self, state: &Self::State, bits: &mut FairBits) -> usize {
        let dist = self.action_dist(state);
        dist.sample_owned(bits)
    }

    /// Fast update path; must agree in distribution with `update_dist`.
    fn advance(&self, state: &mut Self::State, own: usize, opp: usize, bits: &mut FairBits) {
        let dist = self.update_dist(own, opp, state);
        *state = dist.sample_owned(bits);
    }

    /// When the current round is a sampled round of an epoch/sub-epoch
    /// strategy, its `(epoch, sub_epoch, sample_index)` coordinates.
    fn sample_point(&self, _state: &Self::State) -> Option<(u32, u32, u64)> {
        None
    }

    /// Epoch of a state, for per-epoch accounting; 1 where inapplicable.
    fn epoch_of(&self, _state: &Self::State) -> u32 {
        1
    }
}

/// Construction metadata shared by the sampled strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiMapping {
    pub eps: Rational,
    pub xi: Rational,
}
