//! The epoch/sub-epoch sampled strategy.
//!
//! Rounds are partitioned into epochs; epoch `i` has expected length
//! `F(i)` and is split into `i` sub-epochs of `i^2` uniformly sampled
//! rounds each. Off the sample points the strategy plays L and keeps its
//! state; on them it follows a fresh counting base strategy of index `i`
//! per sub-epoch. The sample flag for the next round is redrawn every
//! round with probability `i^3/F(i)`.
//!
//! Two execution modes realize the same process: `PerRound` draws the
//! flag each round; `Gaps` draws the geometric distance to the next
//! sample point directly, which is what makes the strategy cheap in
//! random bits. Distributions reported by `update_dist` always describe
//! the per-round process (the memory semantics proper).

use super::numbering::StateNumbering;
use super::{Dist, MemoryStrategy, StrategyError, XiMapping};
use crate::games::{GeneralizedBigMatch, ROW_L, ROW_R};
use crate::numeric::Rational;
use crate::sim::{CompiledProb, FairBits};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Epochs with precompiled sampling probabilities; beyond this the
/// generic exact path takes over (horizons that large are out of reach).
const CACHED_EPOCHS: u32 = 64;
/// Byte budget for the precomputed stop-probability table.
const ACTION_TABLE_BUDGET: usize = 8 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Redraw the sample flag every round (reference process).
    PerRound,
    /// Draw geometric gaps between sample points (bit-frugal runner).
    Gaps,
}

/// Sample bookkeeping: either next-round flag (per-round mode) or rounds
/// left until the next sample point (gap mode; `Gap(0)` means the current
/// round is sampled, `Gap(u64::MAX)` means the first gap is undrawn).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleClock {
    NextFlag(bool),
    Gap(u64),
}

impl SampleClock {
    #[inline]
    pub fn sampled(&self) -> bool {
        match self {
            SampleClock::NextFlag(b) => *b,
            SampleClock::Gap(g) => *g == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullState {
    pub epoch: u32,
    pub sub_epoch: u32,
    /// Samples already taken in the current sub-epoch.
    pub samples: u64,
    /// Inner base-strategy counter.
    pub counter: BigInt,
    pub clock: SampleClock,
}

#[derive(Debug, Clone)]
pub struct FullStrategy {
    mapping: XiMapping,
    stop_coef: Rational, // xi^4
    one_minus_xi: Rational,
    schedule: super::EpochSchedule,
    counter_steps: Vec<BigInt>,
    n_cols: usize,
    observer: bool,
    mode: SampleMode,
    numbering: StateNumbering,
    /// `P(R)` by exponent `e` in `xi^4 (1-xi)^e`, as far as the budget
    /// allows.
    action_table: Vec<Rational>,
    /// Sampling probability digits per epoch `1..=CACHED_EPOCHS`.
    sample_compiled: Vec<CompiledProb>,
    /// `1 - i^3/F(i)` per epoch, for the geometric gap draws.
    gap_survival: Vec<Rational>,
}

/// The complete sampled strategy for `eps` on a strict generalized Big
/// Match game (or the Big Match itself): `xi = eps^2` for the Big Match
/// and `xi = eps^2 / (4 K^4)` otherwise.
pub fn full_strategy(
    eps: &Rational,
    schedule: super::EpochSchedule,
    game: &GeneralizedBigMatch,
    mode: SampleMode,
) -> Result<FullStrategy, StrategyError> {
    if !eps.is_positive() || eps >= &Rational::one() {
        return Err(StrategyError::InvalidParameter(format!(
            "eps must lie strictly between 0 and 1, got {eps}"
        )));
    }
    game.require_strict()
        .map_err(|e| StrategyError::AssumptionViolated(e.to_string()))?;
    let xi = if game.is_big_match() {
        eps * eps
    } else {
        let k4 = Rational::from_integer(game.max_abs().pow(4) * BigInt::from(4));
        eps * eps / k4
    };
    debug_assert!(xi.is_positive() && xi < Rational::one());

    let one_minus_xi = Rational::one() - &xi;
    let stop_coef = xi.pow(4);

    // Precompute P(R) = xi^4 (1-xi)^e while the byte budget lasts; the
    // exponent cap covers every counter value reachable in the cached
    // epochs when K = 1. With xi = p/q reduced, the entry is
    // p^4 (q-p)^e / q^(4+e), already in lowest terms, so the components
    // are multiplied directly; routing this through rational arithmetic
    // would run a large gcd per entry.
    let k_is_one = game.max_abs() == &BigInt::one();
    let mut action_table = Vec::new();
    if k_is_one {
        let e_cap = (CACHED_EPOCHS as u64 + (CACHED_EPOCHS as u64).pow(2)) as usize;
        let mut budget = ACTION_TABLE_BUDGET;
        let mut num = stop_coef.numer().clone();
        let mut den = stop_coef.denom().clone();
        let step_num = one_minus_xi.numer();
        let step_den = one_minus_xi.denom();
        for _ in 0..=e_cap {
            let size = (num.bits() + den.bits()) as usize / 8 + 1;
            if size > budget {
                break;
            }
            budget -= size;
            action_table.push(Rational::new_raw(num.clone(), den.clone()));
            num *= step_num;
            den *= step_den;
        }
    }

    let sample_compiled = (1..=CACHED_EPOCHS)
        .map(|i| CompiledProb::new(&schedule.sample_prob(i)))
        .collect();
    let gap_survival = (1..=CACHED_EPOCHS)
        .map(|i| Rational::one() - schedule.sample_prob(i))
        .collect();

    Ok(FullStrategy {
        mapping: XiMapping {
            eps: eps.clone(),
            xi,
        },
        stop_coef,
        one_minus_xi,
        schedule,
        counter_steps: (0..game.cols())
            .map(|j| game.counter_step(j).clone())
            .collect(),
        n_cols: game.cols(),
        observer: false,
        mode,
        numbering: StateNumbering::new(game.max_abs()),
        action_table,
        sample_compiled,
        gap_survival,
    })
}

/// The never-stopping observer: same update map, action map plays L
/// always.
pub fn observer_variant(s: &FullStrategy) -> FullStrategy {
    let mut o = s.clone();
    o.observer = true;
    o
}

impl FullStrategy {
    pub fn mapping(&self) -> &XiMapping {
        &self.mapping
    }

    pub fn schedule(&self) -> &super::EpochSchedule {
        &self.schedule
    }

    pub fn numbering(&self) -> &StateNumbering {
        &self.numbering
    }

    pub fn is_observer(&self) -> bool {
        self.observer
    }

    pub fn mode(&self) -> SampleMode {
        self.mode
    }

    pub fn with_mode(&self, mode: SampleMode) -> FullStrategy {
        let mut s = self.clone();
        s.mode = mode;
        s
    }

    /// Stop probability of the base strategy of epoch `i` at counter `c`:
    /// `xi^4 (1-xi)^max(0, i+c)`, exact.
    pub fn stop_probability(&self, epoch: u32, counter: &BigInt) -> Rational {
        let shifted = counter + BigInt::from(epoch);
        if !shifted.is_positive() {
            return self.stop_coef.clone();
        }
        match shifted.to_usize() {
            Some(e) if e < self.action_table.len() => self.action_table[e].clone(),
            Some(e) if e <= i32::MAX as usize => {
                &self.stop_coef * self.one_minus_xi.pow(e as i32)
            }
            _ => panic!(
                "stop probability exponent too large to materialize; \
                 use the sampling path"
            ),
        }
    }

    fn sample_prob(&self, epoch: u32) -> Rational {
        self.schedule.sample_prob(epoch)
    }

    /// Deterministic part of the update on a sampled round.
    fn tuple_update(&self, s: &mut FullState, opp: usize) {
        let cap = (s.epoch as u64) * (s.epoch as u64);
        if s.samples >= cap.saturating_sub(1) {
            if s.sub_epoch >= s.epoch {
                s.epoch += 1;
                s.sub_epoch = 1;
            } else {
                s.sub_epoch += 1;
            }
            s.samples = 0;
            s.counter = BigInt::zero();
        } else {
            s.samples += 1;
            s.counter -= &self.counter_steps[opp];
        }
    }

    fn draw_next_flag(&self, epoch: u32, bits: &mut FairBits) -> bool {
        if let Some(compiled) = self.sample_compiled.get((epoch - 1) as usize) {
            bits.bernoulli_compiled(compiled)
        } else {
            bits.bernoulli(&self.sample_prob(epoch))
        }
    }

    fn draw_gap(&self, epoch: u32, bits: &mut FairBits) -> u64 {
        // dense sampling: sequential trials are as cheap as a direct
        // geometric draw and need no power brackets
        if let Some(compiled) = self.sample_compiled.get((epoch - 1) as usize) {
            if self.sample_prob(epoch) >= Rational::new(1.into(), 8.into()) {
                let mut gap = 1u64;
                while !bits.bernoulli_compiled(compiled) {
                    gap += 1;
                }
                return gap;
            }
        }
        let survival = match self.gap_survival.get((epoch - 1) as usize) {
            Some(q) => q.clone(),
            None => Rational::one() - self.sample_prob(epoch),
        };
        bits.geometric(&survival)
    }
}

impl MemoryStrategy for FullStrategy {
    type State = FullState;

    fn start_state(&self) -> FullState {
        FullState {
            epoch: 1,
            sub_epoch: 1,
            samples: 1,
            counter: BigInt::zero(),
            clock: match self.mode {
                SampleMode::PerRound => SampleClock::NextFlag(false),
                SampleMode::Gaps => SampleClock::Gap(u64::MAX),
            },
        }
    }

    fn own_actions(&self) -> usize {
        2
    }

    fn opp_actions(&self) -> usize {
        self.n_cols
    }

    fn action_dist(&self, state: &FullState) -> Dist<usize> {
        if self.observer || !state.clock.sampled() {
            return Dist::point(ROW_L);
        }
        let p = self.stop_probability(state.epoch, &state.counter);
        Dist::new(vec![(ROW_L, Rational::one() - &p), (ROW_R, p)])
    }

    fn update_dist(&self, _own: usize, opp: usize, state: &FullState) -> Dist<FullState> {
        let mut next = state.clone();
        if state.clock.sampled() {
            self.tuple_update(&mut next, opp);
        }
        let p = self.sample_prob(next.epoch);
        let mut hit = next.clone();
        hit.clock = SampleClock::NextFlag(true);
        let mut miss = next;
        miss.clock = SampleClock::NextFlag(false);
        Dist::new(vec![(hit, p.clone()), (miss, Rational::one() - p)])
    }

    fn state_code(&self, state: &FullState) -> u128 {
        self.numbering.encode(state)
    }

    fn decode_state(&self, code: u128) -> Option<FullState> {
        self.numbering.decode(code)
    }

    fn sample_action(&self, state: &FullState, bits: &mut FairBits) -> usize {
        if self.observer || !state.clock.sampled() {
            return ROW_L;
        }
        let shifted = &state.counter + BigInt::from(state.epoch);
        let stop = if !shifted.is_positive() {
            bits.bernoulli(&self.stop_coef)
        } else {
            match shifted.to_usize() {
                Some(e) if e < self.action_table.len() => {
                    bits.bernoulli(&self.action_table[e])
                }
                _ => {
                    let exp = shifted.to_biguint().expect("positive");
                    bits.bernoulli_scaled_pow(&self.stop_coef, &self.one_minus_xi, &exp)
                }
            }
        };
        if stop {
            ROW_R
        } else {
            ROW_L
        }
    }

    fn advance(&self, state: &mut FullState, _own: usize, opp: usize, bits: &mut FairBits) {
        match (&self.mode, &state.clock) {
            (SampleMode::PerRound, clock) => {
                if clock.sampled() {
                    self.tuple_update(state, opp);
                }
                let b = self.draw_next_flag(state.epoch, bits);
                state.clock = SampleClock::NextFlag(b);
            }
            (SampleMode::Gaps, SampleClock::Gap(0)) => {
                self.tuple_update(state, opp);
                let gap = self.draw_gap(state.epoch, bits);
                state.clock = SampleClock::Gap(gap - 1);
            }
            (SampleMode::Gaps, SampleClock::Gap(u64::MAX)) => {
                // first round: the initial gap is drawn lazily
                let gap = self.draw_gap(state.epoch, bits);
                state.clock = SampleClock::Gap(gap - 1);
            }
            (SampleMode::Gaps, SampleClock::Gap(g)) => {
                state.clock = SampleClock::Gap(g - 1);
            }
            (SampleMode::Gaps, SampleClock::NextFlag(_)) => {
                unreachable!("gap-mode strategy with per-round clock")
            }
        }
    }

    fn sample_point(&self, state: &FullState) -> Option<(u32, u32, u64)> {
        state
            .clock
            .sampled()
            .then(|| (state.epoch, state.sub_epoch, state.samples + 1))
    }

    fn epoch_of(&self, state: &FullState) -> u32 {
        state.epoch
    }
}

/// Lower bound on the largest exponent reachable in epoch `i` (used by
/// patience audits): `i + K i^2 - 1`.
pub fn max_exponent(i: u32, k: &BigInt) -> BigUint {
    (BigInt::from(i) + k * BigInt::from(i as u64 * i as u64) - 1u8)
        .to_biguint()
        .expect("positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{COL_L, COL_R};
    use crate::numeric::ratio;
    use crate::sim::{derive_stream, FairBits};
    use crate::strategies::EpochSchedule;

    fn big_match_full(eps_num: i64, eps_den: i64) -> FullStrategy {
        full_strategy(
            &ratio(eps_num, eps_den),
            EpochSchedule::loglog(),
            &GeneralizedBigMatch::big_match(),
            SampleMode::PerRound,
        )
        .unwrap()
    }

    fn state(epoch: u32, sub_epoch: u32, samples: u64, counter: i64, b: bool) -> FullState {
        FullState {
            epoch,
            sub_epoch,
            samples,
            counter: BigInt::from(counter),
            clock: SampleClock::NextFlag(b),
        }
    }

    #[test]
    fn xi_mapping_big_match() {
        let s = big_match_full(1, 5);
        assert_eq!(s.mapping().xi, ratio(1, 25));
    }

    #[test]
    fn xi_mapping_generalized_with_unit_k() {
        let s = full_strategy(
            &ratio(1, 5),
            EpochSchedule::loglog(),
            &GeneralizedBigMatch::zero_value_big_match(),
            SampleMode::PerRound,
        )
        .unwrap();
        // K = 1: xi = eps^2 / 4
        assert_eq!(s.mapping().xi, ratio(1, 100));
    }

    #[test]
    fn rejects_non_strict_games() {
        // row R payoffs shifted so the derived game has nonzero value
        let g = crate::games::parse_game("1 -1\n1* 1*").unwrap();
        let g = GeneralizedBigMatch::new(g).unwrap();
        assert!(matches!(
            full_strategy(
                &ratio(1, 5),
                EpochSchedule::loglog(),
                &g,
                SampleMode::PerRound
            ),
            Err(StrategyError::AssumptionViolated(_))
        ));
    }

    #[test]
    fn epoch_end_case() {
        // (2,2,3,l,1): j = i = 2 and k = i^2 - 1 = 3, so the epoch ends:
        // next tuple (3,1,0,0)
        let s = big_match_full(1, 5);
        let d = s.update_dist(ROW_L, COL_L, &state(2, 2, 3, -2, true));
        for (next, _) in d.items() {
            assert_eq!(
                (next.epoch, next.sub_epoch, next.samples, next.counter.clone()),
                (3, 1, 0, BigInt::zero())
            );
        }
        // the sample flag is Bernoulli(i'^3 / F(i')) with i' = 3 (clamped)
        assert_eq!(d.probability_of(|n| n.clock.sampled()), ratio(1, 1));
    }

    #[test]
    fn sub_epoch_end_case() {
        let s = big_match_full(1, 5);
        let d = s.update_dist(ROW_L, COL_R, &state(3, 1, 8, 5, true));
        for (next, _) in d.items() {
            assert_eq!(
                (next.epoch, next.sub_epoch, next.samples, next.counter.clone()),
                (3, 2, 0, BigInt::zero())
            );
        }
    }

    #[test]
    fn unsampled_round_keeps_everything() {
        let s = big_match_full(1, 5);
        let before = state(12, 7, 40, -9, false);
        let d = s.update_dist(ROW_L, COL_R, &before);
        for (next, _) in d.items() {
            assert_eq!(
                (next.epoch, next.sub_epoch, next.samples, next.counter.clone()),
                (12, 7, 40, BigInt::from(-9))
            );
        }
        // flag probability for epoch 12: 12^3 / 2^12
        assert_eq!(
            d.probability_of(|n| n.clock.sampled()),
            ratio(1728, 4096)
        );
    }

    #[test]
    fn sample_within_sub_epoch_updates_counter() {
        let s = big_match_full(1, 5);
        let d = s.update_dist(ROW_L, COL_R, &state(3, 1, 2, 1, true));
        for (next, _) in d.items() {
            assert_eq!(next.samples, 3);
            assert_eq!(next.counter, BigInt::zero()); // 1 - 1 on column R
        }
        let d = s.update_dist(ROW_L, COL_L, &state(3, 1, 2, 1, true));
        for (next, _) in d.items() {
            assert_eq!(next.counter, BigInt::from(2));
        }
    }

    #[test]
    fn action_is_l_when_not_sampled() {
        let s = big_match_full(1, 5);
        let d = s.action_dist(&state(4, 2, 5, 0, false));
        assert!(d.is_degenerate());
        assert_eq!(d.items()[0].0, ROW_L);
    }

    #[test]
    fn action_follows_base_strategy_when_sampled() {
        let s = big_match_full(1, 2); // eps = 1/2, xi = 1/4
        // epoch 3, counter -5: i + l <= 0, so P(R) = xi^4 = 1/256
        let d = s.action_dist(&state(3, 1, 6, -5, true));
        assert_eq!(d.probability_of(|&a| a == ROW_R), ratio(1, 256));
        // epoch 3, counter 2: P(R) = xi^4 (1-xi)^5 = (1/256)(3/4)^5
        let d = s.action_dist(&state(3, 1, 6, 2, true));
        assert_eq!(
            d.probability_of(|&a| a == ROW_R),
            ratio(243, 256 * 1024)
        );
    }

    #[test]
    fn observer_plays_l_everywhere_with_same_updates() {
        let s = big_match_full(1, 5);
        let o = observer_variant(&s);
        let st = state(5, 3, 11, 3, true);
        assert!(o.action_dist(&st).is_degenerate());
        assert_eq!(
            s.update_dist(ROW_L, COL_R, &st),
            o.update_dist(ROW_L, COL_R, &st)
        );
    }

    #[test]
    fn start_state_reaches_epoch_two() {
        // From (1,1,1,0,*): the first sampled round ends epoch 1.
        let s = big_match_full(1, 5);
        let d = s.update_dist(ROW_L, COL_L, &state(1, 1, 1, 0, true));
        for (next, _) in d.items() {
            assert_eq!((next.epoch, next.sub_epoch), (2, 1));
        }
    }

    #[test]
    fn gap_mode_matches_per_round_distribution() {
        // Run both modes for many short plays and compare the sampled-
        // round counts; the processes are identical in distribution.
        let per_round = big_match_full(1, 2);
        let gaps = per_round.with_mode(SampleMode::Gaps);
        let rounds = 200u32;
        let plays = 400u64;
        let mut count_a = 0u64;
        let mut count_b = 0u64;
        for rep in 0..plays {
            let mut bits_a = FairBits::new(derive_stream(99, rep, 0));
            let mut bits_b = FairBits::new(derive_stream(717, rep, 0));
            let mut sa = per_round.start_state();
            let mut sb = gaps.start_state();
            for _ in 0..rounds {
                count_a += u64::from(sa.clock.sampled());
                count_b += u64::from(sb.clock.sampled());
                per_round.advance(&mut sa, ROW_L, COL_L, &mut bits_a);
                gaps.advance(&mut sb, ROW_L, COL_L, &mut bits_b);
            }
            assert_eq!(sa.epoch >= 1, sb.epoch >= 1);
        }
        // means agree within 4 sigma (samples per play ~ deterministic
        // early epochs + noise)
        let diff = (count_a as f64 - count_b as f64).abs();
        let scale = (count_a + count_b) as f64;
        assert!(diff < 4.0 * scale.sqrt() + 10.0, "diff {diff} scale {scale}");
        // gap mode uses strictly fewer bits per round at this horizon
    }

    #[test]
    fn max_exponent_formula() {
        assert_eq!(max_exponent(3, &BigInt::from(1)), BigUint::from(11u8));
    }
}
