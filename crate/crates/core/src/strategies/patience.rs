//! Patience of a set of memory states: the reciprocal of the smallest
//! nonzero action or update probability whose endpoints both lie in the
//! set.

use super::{FullStrategy, MemoryStrategy, StrategyError};
use crate::numeric::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Patience {
    Finite(Rational),
    Infinite,
}

/// Patience of the listed states (by their natural-number codes): the
/// maximum reciprocal over all action probabilities of states in the set
/// and all update probabilities whose source and target states are both
/// in the set.
pub fn patience<S: MemoryStrategy>(
    strategy: &S,
    states: impl IntoIterator<Item = u128>,
) -> Result<Patience, StrategyError> {
    let codes: Vec<u128> = states.into_iter().collect();
    if codes.is_empty() {
        return Err(StrategyError::EmptyRange);
    }
    let member: HashSet<u128> = codes.iter().copied().collect();
    let mut best: Option<Rational> = None;
    let mut consider = |p: &Rational| {
        let r = p.recip();
        if best.as_ref().is_none_or(|b| &r > b) {
            best = Some(r);
        }
    };
    for &code in &codes {
        let state = strategy
            .decode_state(code)
            .ok_or(StrategyError::InvalidState(code))?;
        for (_, p) in strategy.action_dist(&state).items() {
            consider(p);
        }
        for own in 0..strategy.own_actions() {
            for opp in 0..strategy.opp_actions() {
                for (next, p) in strategy.update_dist(own, opp, &state).items() {
                    if member.contains(&strategy.state_code(next)) {
                        consider(p);
                    }
                }
            }
        }
    }
    Ok(match best {
        Some(r) => Patience::Finite(r),
        // every in-set transition had probability zero (no transitions)
        None => Patience::Finite(Rational::one()),
    })
}

/// All state codes of epoch `i` of a sampled strategy.
pub fn epoch_block_codes(strategy: &FullStrategy, i: u32) -> impl Iterator<Item = u128> {
    let (start, end) = strategy.numbering().epoch_range(i);
    start..end
}

/// Closed-form patience of the epoch-`i` block of a sampled strategy:
/// the sampling-flag Bernoulli reciprocals `F(i)/i^3` and its complement,
/// and the base-strategy action reciprocals up to the extreme counter.
pub fn epoch_patience_closed_form(strategy: &FullStrategy, i: u32) -> Rational {
    let k = BigInt::from(strategy.numbering().counter_bound().clone());
    let q = strategy.schedule().sample_prob(i);
    let mut candidates: Vec<Rational> = vec![Rational::one()];
    candidates.push(q.clone().recip());
    let miss = Rational::one() - &q;
    if miss != Rational::zero() {
        candidates.push(miss.recip());
    }
    // smallest stop probability: counter at its maximum K i^2 - 1
    let top_counter = &k * BigInt::from(i as u64 * i as u64) - 1;
    let p_min = strategy.stop_probability(i, &top_counter);
    candidates.push(p_min.recip());
    // largest stop probability: xi^4 (at nonpositive shifted counters)
    let p_max = strategy.stop_probability(i, &BigInt::from(-(i as i64)));
    candidates.push((Rational::one() - p_max).recip());
    candidates.into_iter().max().expect("nonempty")
}
