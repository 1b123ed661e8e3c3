//! Single-state strategies that play a fixed mixture every round.

use super::{Dist, MemoryStrategy, StrategyError};
use crate::numeric::Rational;
use crate::sim::FairBits;
use num_traits::{One, Signed};

#[derive(Debug, Clone)]
pub struct StationaryStrategy {
    mixture: Vec<Rational>,
    opp_actions: usize,
}

impl StationaryStrategy {
    pub fn new(mixture: Vec<Rational>, opp_actions: usize) -> Result<Self, StrategyError> {
        if mixture.iter().any(Signed::is_negative)
            || mixture.iter().sum::<Rational>() != Rational::one()
        {
            return Err(StrategyError::InvalidParameter(
                "mixture must be a probability distribution".into(),
            ));
        }
        Ok(StationaryStrategy {
            mixture,
            opp_actions,
        })
    }

    /// Two-action stationary strategy playing R with probability `q`.
    pub fn big_match(q: &Rational) -> Result<Self, StrategyError> {
        if q.is_negative() || q > &Rational::one() {
            return Err(StrategyError::InvalidParameter(format!(
                "q must lie in [0,1], got {q}"
            )));
        }
        StationaryStrategy::new(vec![Rational::one() - q, q.clone()], 2)
    }

    pub fn mixture(&self) -> &[Rational] {
        &self.mixture
    }
}

impl MemoryStrategy for StationaryStrategy {
    type State = ();

    fn start_state(&self) {}

    fn own_actions(&self) -> usize {
        self.mixture.len()
    }

    fn opp_actions(&self) -> usize {
        self.opp_actions
    }

    fn action_dist(&self, _state: &()) -> Dist<usize> {
        Dist::new(
            self.mixture
                .iter()
                .cloned()
                .enumerate()
                .collect::<Vec<_>>(),
        )
    }

    fn update_dist(&self, _own: usize, _opp: usize, _state: &()) -> Dist<()> {
        Dist::point(())
    }

    fn deterministic_update(&self) -> bool {
        true
    }

    fn state_code(&self, _state: &()) -> u128 {
        0
    }

    fn decode_state(&self, code: u128) -> Option<()> {
        (code == 0).then_some(())
    }

    fn sample_action(&self, _state: &(), bits: &mut FairBits) -> usize {
        if self.mixture.len() == 2 {
            // cheap path for the two-action case
            usize::from(bits.bernoulli(&self.mixture[1]))
        } else {
            let probs: Vec<Rational> = self.mixture.clone();
            bits.sample_index(&probs)
        }
    }

    fn advance(&self, _state: &mut (), _own: usize, _opp: usize, _bits: &mut FairBits) {}
}
