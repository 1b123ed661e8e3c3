//! Epoch-monotone numbering of the sampled strategy's memory states.
//!
//! All states of epoch `i` map strictly below all states of epoch `i+1`.
//! The starting state maps to 0. Within epoch `i >= 2` a block of
//! `i * i^2 * (2K i^2 - 1) * 2` codes is laid out by sub-epoch, sample
//! count, counter (shifted to be nonnegative) and sample flag, where `K`
//! bounds the per-step counter movement. Epoch 1 is special: its only
//! counter value is 0 and the starting state carries the quirky sample
//! count 1, so it owns a fixed block of four codes.

use super::full::{FullState, SampleClock};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

const EPOCH_ONE_BLOCK: u128 = 4;
const MAX_CACHED_EPOCH: u32 = 96;

#[derive(Debug, Clone)]
pub struct StateNumbering {
    /// Counter bound `K` (saturating in the offset arithmetic).
    k: u128,
    k_exact: BigUint,
    /// `offsets[i]` is the first code of epoch `i` (index 0 unused);
    /// saturating at `u128::MAX`.
    offsets: Vec<u128>,
}

fn block_size(i: u128, k: u128) -> u128 {
    // i * i^2 * (2 K i^2 - 1) * 2
    let sq = i.saturating_mul(i);
    let counter_range = k
        .saturating_mul(sq)
        .saturating_mul(2)
        .saturating_sub(1);
    i.saturating_mul(sq)
        .saturating_mul(counter_range)
        .saturating_mul(2)
}

fn block_size_exact(i: u32, k: &BigUint) -> BigUint {
    let i = BigUint::from(i);
    let sq = &i * &i;
    let counter_range = k * &sq * 2u8 - 1u8;
    i * sq * counter_range * 2u8
}

impl StateNumbering {
    pub fn new(k_bound: &BigInt) -> Self {
        assert!(k_bound.is_positive(), "counter bound must be positive");
        let k_exact = k_bound.magnitude().clone();
        let k = k_exact.to_u128().unwrap_or(u128::MAX);
        let mut offsets = vec![0u128; 2];
        offsets.push(EPOCH_ONE_BLOCK); // epoch 2 starts after the fixed block
        for i in 2..MAX_CACHED_EPOCH {
            let prev = offsets[i as usize];
            offsets.push(prev.saturating_add(block_size(i as u128, k)));
        }
        StateNumbering { k, k_exact, offsets }
    }

    /// Counter-movement bound `K`.
    pub fn counter_bound(&self) -> &BigUint {
        &self.k_exact
    }

    /// First code of epoch `i` (saturating).
    pub fn epoch_offset(&self, i: u32) -> u128 {
        if (i as usize) < self.offsets.len() {
            self.offsets[i as usize]
        } else {
            u128::MAX
        }
    }

    /// Code range `[start, end)` of epoch `i`.
    pub fn epoch_range(&self, i: u32) -> (u128, u128) {
        let start = self.epoch_offset(i);
        let end = if i == 1 {
            EPOCH_ONE_BLOCK
        } else {
            start.saturating_add(block_size(i as u128, self.k))
        };
        (start, end)
    }

    pub fn encode(&self, s: &FullState) -> u128 {
        let b = u128::from(s.clock.sampled());
        if s.epoch == 1 {
            // (1,1,1,0,0) -> 0, (1,1,1,0,1) -> 1, (1,1,0,0,0) -> 2, ...
            let k_part = if s.samples == 1 { 0 } else { 2 };
            return k_part + b;
        }
        let i = u128::from(s.epoch);
        let sq = i * i;
        let counter_range = match self.k.checked_mul(sq).and_then(|v| v.checked_mul(2)) {
            Some(v) => v - 1,
            None => return u128::MAX,
        };
        // allocation-free path: everything fits comfortably in i128 when
        // the counter does and K*i^2 is small
        let counter_idx = match (s.counter.to_i128(), counter_range <= i128::MAX as u128) {
            (Some(c), true) => {
                let shifted = c + ((counter_range as i128) + 1) / 2 - 1;
                match u128::try_from(shifted) {
                    Ok(v) => v,
                    Err(_) => return u128::MAX,
                }
            }
            _ => {
                let shift =
                    &s.counter + BigInt::from(self.k_exact.clone()) * BigInt::from(sq) - 1u8;
                match shift.to_u128() {
                    Some(v) => v,
                    None => return u128::MAX,
                }
            }
        };
        let within = ((u128::from(s.sub_epoch) - 1)
            .saturating_mul(sq)
            .saturating_add(u128::from(s.samples)))
        .saturating_mul(counter_range)
        .saturating_add(counter_idx)
        .saturating_mul(2)
        .saturating_add(b);
        self.epoch_offset(s.epoch).saturating_add(within)
    }

    /// Exact (arbitrary-precision) code, for audits.
    pub fn encode_exact(&self, s: &FullState) -> BigUint {
        let b = BigUint::from(u8::from(s.clock.sampled()));
        if s.epoch == 1 {
            let k_part = BigUint::from(if s.samples == 1 { 0u8 } else { 2u8 });
            return k_part + b;
        }
        let mut offset = BigUint::from(EPOCH_ONE_BLOCK);
        for r in 2..s.epoch {
            offset += block_size_exact(r, &self.k_exact);
        }
        let i = BigUint::from(s.epoch);
        let sq = &i * &i;
        let counter_range = &self.k_exact * &sq * 2u8 - 1u8;
        let shift = (&s.counter + BigInt::from(&self.k_exact * &sq) - 1u8)
            .to_biguint()
            .expect("counter within the epoch range");
        let within = ((BigUint::from(s.sub_epoch - 1) * &sq + s.samples) * counter_range
            + shift)
            * 2u8
            + b;
        offset + within
    }

    /// Inverse of `encode` on the cached, non-saturated region.
    pub fn decode(&self, code: u128) -> Option<FullState> {
        if code < EPOCH_ONE_BLOCK {
            return Some(FullState {
                epoch: 1,
                sub_epoch: 1,
                samples: if code < 2 { 1 } else { 0 },
                counter: BigInt::from(0),
                clock: SampleClock::NextFlag(code % 2 == 1),
            });
        }
        let mut epoch = None;
        for i in 2..MAX_CACHED_EPOCH {
            let (start, end) = self.epoch_range(i);
            if start == u128::MAX {
                break;
            }
            if code >= start && code < end {
                epoch = Some((i, start));
                break;
            }
        }
        let (i, start) = epoch?;
        let iu = u128::from(i);
        let sq = iu * iu;
        let counter_range = self.k.checked_mul(sq)?.checked_mul(2)? - 1;
        let mut rest = code - start;
        let b = rest % 2 == 1;
        rest /= 2;
        let counter_idx = rest % counter_range;
        rest /= counter_range;
        let samples = rest % sq;
        let sub_epoch = rest / sq + 1;
        if sub_epoch > iu {
            return None;
        }
        let counter =
            BigInt::from(counter_idx) + 1 - BigInt::from(self.k_exact.clone()) * BigInt::from(sq);
        Some(FullState {
            epoch: i,
            sub_epoch: sub_epoch as u32,
            samples: samples as u64,
            counter,
            clock: SampleClock::NextFlag(b),
        })
    }
}
