//! The counting base strategies.
//!
//! An integer counter tracks (the negative of) the running sum of derived
//! row-R entries of the opponent's actions; in the Big Match this is the
//! surplus of L over R. The stop action R is played with probability
//! `c * (1-xi)^(i+j)` when `i + j > 0` and `c` otherwise, where `c = xi^4`
//! for the base strategy of index `i` and `c = xi^2` with `i = 0` for the
//! classic log-space strategy.

use super::{Dist, MemoryStrategy, StrategyError};
use crate::games::{GeneralizedBigMatch, ROW_L, ROW_R};
use crate::numeric::Rational;
use crate::sim::FairBits;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct BaseStrategy {
    index: u32,
    xi: Rational,
    stop_coef: Rational,
    one_minus_xi: Rational,
    counter_steps: Vec<BigInt>,
}

impl BaseStrategy {
    /// The base strategy of index `i` for a generalized Big Match game
    /// (or the Big Match itself); stop coefficient `xi^4`.
    pub fn new(
        index: u32,
        xi: &Rational,
        game: &GeneralizedBigMatch,
    ) -> Result<Self, StrategyError> {
        check_xi(xi)?;
        Ok(BaseStrategy {
            index,
            xi: xi.clone(),
            stop_coef: xi.pow(4),
            one_minus_xi: Rational::one() - xi,
            counter_steps: (0..game.cols()).map(|j| game.counter_step(j).clone()).collect(),
        })
    }

    /// Kohlberg's classic strategy: index 0 with stop coefficient `xi^2`.
    pub fn classic(xi: &Rational, game: &GeneralizedBigMatch) -> Result<Self, StrategyError> {
        check_xi(xi)?;
        Ok(BaseStrategy {
            index: 0,
            xi: xi.clone(),
            stop_coef: xi.pow(2),
            one_minus_xi: Rational::one() - xi,
            counter_steps: (0..game.cols()).map(|j| game.counter_step(j).clone()).collect(),
        })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn xi(&self) -> &Rational {
        &self.xi
    }

    /// Probability of playing R at counter value `counter`.
    ///
    /// Panics when the positive exponent `i + counter` exceeds `i32`; at
    /// that scale callers must go through the lazy sampling path instead
    /// of materializing the probability.
    pub fn stop_probability(&self, counter: &BigInt) -> Rational {
        let shifted = counter + BigInt::from(self.index);
        if shifted.is_positive() {
            let e = shifted
                .to_i32()
                .expect("base-strategy counter exponent out of i32 range");
            &self.stop_coef * self.one_minus_xi.pow(e)
        } else {
            self.stop_coef.clone()
        }
    }

    pub fn counter_step(&self, opp: usize) -> &BigInt {
        &self.counter_steps[opp]
    }

    /// Deterministic counter update: `j - derived(R, opp)`.
    pub fn next_counter(&self, counter: &BigInt, opp: usize) -> BigInt {
        counter - &self.counter_steps[opp]
    }
}

fn check_xi(xi: &Rational) -> Result<(), StrategyError> {
    if xi.is_positive() && xi < &Rational::one() {
        Ok(())
    } else {
        Err(StrategyError::InvalidParameter(format!(
            "xi must lie strictly between 0 and 1, got {xi}"
        )))
    }
}

/// Zig-zag embedding of the integer counter into the naturals:
/// `0, -1, 1, -2, 2, ...` map to `0, 1, 2, 3, 4, ...`.
pub fn zigzag_encode(n: &BigInt) -> Option<u128> {
    if n.is_negative() {
        ((-n.clone()) * 2u8 - 1u8).to_u128()
    } else {
        (n.clone() * 2u8).to_u128()
    }
}

pub fn zigzag_decode(code: u128) -> BigInt {
    if code % 2 == 0 {
        BigInt::from(code / 2)
    } else {
        -BigInt::from(code / 2 + 1)
    }
}

impl MemoryStrategy for BaseStrategy {
    type State = BigInt;

    fn start_state(&self) -> BigInt {
        BigInt::zero()
    }

    fn own_actions(&self) -> usize {
        2
    }

    fn opp_actions(&self) -> usize {
        self.counter_steps.len()
    }

    fn action_dist(&self, state: &BigInt) -> Dist<usize> {
        let p = self.stop_probability(state);
        Dist::new(vec![(ROW_L, Rational::one() - &p), (ROW_R, p)])
    }

    fn update_dist(&self, _own: usize, opp: usize, state: &BigInt) -> Dist<BigInt> {
        Dist::point(self.next_counter(state, opp))
    }

    fn deterministic_update(&self) -> bool {
        true
    }

    fn state_code(&self, state: &BigInt) -> u128 {
        zigzag_encode(state).unwrap_or(u128::MAX)
    }

    fn decode_state(&self, code: u128) -> Option<BigInt> {
        Some(zigzag_decode(code))
    }

    fn sample_action(&self, state: &BigInt, bits: &mut FairBits) -> usize {
        let p = self.stop_probability(state);
        if bits.bernoulli(&p) {
            ROW_R
        } else {
            ROW_L
        }
    }

    fn advance(&self, state: &mut BigInt, _own: usize, opp: usize, _bits: &mut FairBits) {
        *state -= &self.counter_steps[opp];
    }
}

/// The classic log-space-counter strategy as a standalone constructor for
/// the Big Match.
pub fn kohlberg_classic(xi: &Rational) -> Result<BaseStrategy, StrategyError> {
    BaseStrategy::classic(xi, &GeneralizedBigMatch::big_match())
}
