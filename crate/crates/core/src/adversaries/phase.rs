//! The phase adversary from the patience lower bound.
//!
//! Phases have lengths `l_i = ceil(eps^-i)`. The first `k` phases play L
//! with probability `1-eps` each round; in every later phase the first
//! `ceil((1-eps) l_i)` rounds are deterministic R, followed by the same
//! per-round randomization.

use super::AdversaryError;
use crate::games::{COL_L, COL_R};
use crate::numeric::Rational;
use crate::sim::{CompiledProb, FairBits};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Debug, Clone)]
pub struct PhaseAdversaryConfig {
    pub eps: Rational,
    pub opening_phases: u32,
    /// Cumulative phase ends `T_i`, precomputed far beyond any horizon.
    boundaries: Vec<u64>,
    /// Deterministic-R prefix length per phase (same indexing).
    stretch: Vec<u64>,
    compiled_eps: CompiledProb,
}

impl PhaseAdversaryConfig {
    pub fn new(eps: &Rational, k: u32) -> Result<Self, AdversaryError> {
        if !eps.is_positive() || eps >= &Rational::new(1.into(), 2.into()) {
            return Err(AdversaryError::InvalidParameter(format!(
                "phase eps must lie in (0, 1/2), got {eps}"
            )));
        }
        let mut boundaries = Vec::new();
        let mut stretch = Vec::new();
        let mut total = 0u64;
        let inv = eps.clone().recip();
        let mut power = Rational::one();
        let one_minus = Rational::one() - eps;
        while total < u64::MAX / 4 {
            power *= &inv;
            let len = power
                .ceil()
                .to_integer()
                .to_u64()
                .unwrap_or(u64::MAX / 4);
            let det = (&one_minus * Rational::from_integer(BigInt::from(len)))
                .ceil()
                .to_integer()
                .to_u64()
                .unwrap_or(len);
            total = total.saturating_add(len);
            boundaries.push(total);
            stretch.push(det.min(len));
            if boundaries.len() > 128 {
                break;
            }
        }
        Ok(PhaseAdversaryConfig {
            compiled_eps: CompiledProb::new(eps),
            eps: eps.clone(),
            opening_phases: k,
            boundaries,
            stretch,
        })
    }

    /// 1-based phase index of a round, with the round offset inside it.
    pub fn phase_of(&self, round: u64) -> (u32, u64) {
        debug_assert!(round >= 1);
        let mut prev_end = 0u64;
        for (idx, &end) in self.boundaries.iter().enumerate() {
            if round <= end {
                return (idx as u32 + 1, round - prev_end);
            }
            prev_end = end;
        }
        let last = self.boundaries.len() as u32;
        (last, round - prev_end)
    }

    /// Last round of phase `i`.
    pub fn phase_end(&self, i: u32) -> u64 {
        self.boundaries[(i - 1) as usize]
    }
}

pub fn phase_adversary_action(
    cfg: &PhaseAdversaryConfig,
    round: u64,
    bits: &mut FairBits,
) -> usize {
    let (phase, offset) = cfg.phase_of(round);
    if phase > cfg.opening_phases {
        let det = cfg.stretch[(phase - 1) as usize];
        if offset <= det {
            return COL_R;
        }
    }
    if bits.bernoulli_compiled(&cfg.compiled_eps) {
        COL_R
    } else {
        COL_L
    }
}
