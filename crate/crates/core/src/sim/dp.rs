//! Exact dynamic-programming oracles for the base strategies.
//!
//! Against a fixed opponent word the counter path is deterministic, so
//! the survival probability evolves by one exact product per step. The
//! Big Match form classifies stops as wins or losses by the opponent's
//! letter; the generalized form accumulates the signed outcome masses and
//! the total stop probability.

use super::SimError;
use crate::games::{generalized_density, GeneralizedBigMatch, COL_L, ROW_R};
use crate::numeric::{rat, Rational};
use crate::strategies::BaseStrategy;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const DEFAULT_DP_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatchDp {
    pub p_win: Rational,
    pub p_loss: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedDp {
    /// `-E[U | U<0] P[U<0]`: the expected magnitude of negative outcomes.
    pub e_neg: Rational,
    /// `E[U | U>0] P[U>0]`.
    pub e_pos: Rational,
    pub p_stop: Rational,
}

fn base_strategy(
    index: u32,
    xi: &Rational,
    game: &GeneralizedBigMatch,
) -> Result<BaseStrategy, SimError> {
    BaseStrategy::new(index, xi, game).map_err(|e| SimError::InvalidParameter(e.to_string()))
}

fn check_cap(len: usize, cap: usize) -> Result<(), SimError> {
    if len > cap {
        Err(SimError::CapExceeded { len, cap })
    } else {
        Ok(())
    }
}

/// Big Match: exact win/loss stop masses of the index-`i` base strategy
/// against an opponent word over the two columns.
pub fn exact_stop_dp_big_match(
    index: u32,
    xi: &Rational,
    word: &[usize],
) -> Result<BigMatchDp, SimError> {
    exact_stop_dp_big_match_capped(index, xi, word, DEFAULT_DP_CAP, None)
}

pub(crate) fn exact_stop_dp_big_match_capped(
    index: u32,
    xi: &Rational,
    word: &[usize],
    cap: usize,
    coef_override: Option<&Rational>,
) -> Result<BigMatchDp, SimError> {
    check_cap(word.len(), cap)?;
    let game = GeneralizedBigMatch::big_match();
    let strategy = base_strategy(index, xi, &game)?;
    let mut survive = Rational::one();
    let mut counter = BigInt::zero();
    let mut p_win = Rational::zero();
    let mut p_loss = Rational::zero();
    for &col in word {
        let mut p_r = strategy.stop_probability(&counter);
        if let Some(coef) = coef_override {
            // scale the stop coefficient (mutation testing hook)
            p_r = p_r / strategy.xi().pow(4) * coef;
        }
        let stop_mass = &survive * &p_r;
        if col == COL_L {
            p_loss += &stop_mass;
        } else {
            p_win += &stop_mass;
        }
        survive -= stop_mass;
        counter = strategy.next_counter(&counter, col);
    }
    Ok(BigMatchDp { p_win, p_loss })
}

/// Generalized form: signed outcome masses and the total stop
/// probability, weighting by the per-column absorption probabilities.
pub fn exact_stop_dp(
    index: u32,
    xi: &Rational,
    word: &[usize],
    game: &GeneralizedBigMatch,
) -> Result<GeneralizedDp, SimError> {
    exact_stop_dp_capped(index, xi, word, game, DEFAULT_DP_CAP, None)
}

pub(crate) fn exact_stop_dp_capped(
    index: u32,
    xi: &Rational,
    word: &[usize],
    game: &GeneralizedBigMatch,
    cap: usize,
    coef_override: Option<&Rational>,
) -> Result<GeneralizedDp, SimError> {
    check_cap(word.len(), cap)?;
    let strategy = base_strategy(index, xi, game)?;
    let mut survive = Rational::one();
    let mut counter = BigInt::zero();
    let mut e_neg = Rational::zero();
    let mut e_pos = Rational::zero();
    let mut p_stop = Rational::zero();
    for &col in word {
        let mut p_r = strategy.stop_probability(&counter);
        if let Some(coef) = coef_override {
            p_r = p_r / strategy.xi().pow(4) * coef;
        }
        let omega = game.game().stop_prob(ROW_R, col);
        let payoff = game.game().payoff(ROW_R, col);
        let stop_mass = &survive * &p_r * omega;
        p_stop += &stop_mass;
        if payoff.is_positive() {
            e_pos += &stop_mass * payoff;
        } else if payoff.is_negative() {
            e_neg += &stop_mass * &(-payoff);
        }
        survive -= stop_mass;
        counter = strategy.next_counter(&counter, col);
    }
    Ok(GeneralizedDp {
        e_neg,
        e_pos,
        p_stop,
    })
}

#[derive(Debug, Clone)]
pub struct LemmaRanges {
    pub max_index: u32,
    pub max_len: usize,
    pub xis: Vec<Rational>,
}

impl Default for LemmaRanges {
    fn default() -> Self {
        LemmaRanges {
            max_index: 3,
            max_len: 8,
            xis: vec![
                Rational::new(1.into(), 2.into()),
                Rational::new(1.into(), 4.into()),
            ],
        }
    }
}

#[derive(Debug, Clone)]
pub struct LemmaViolation {
    pub index: u32,
    pub xi: Rational,
    pub word: Vec<usize>,
    pub item: u8,
    pub detail: String,
}

/// Exhaustively checks both base-strategy stop-probability inequalities
/// over all opponent words in range; returns the violations found.
///
/// Item 1 bounds the losing mass by the winning mass:
/// `e_neg <= xi^3 (1-xi)^(i-K+1) + (1-xi)^(1-2K) e_pos`.
/// Item 2 forces stops under low generalized density:
/// `gdens <= -2Ki/T` implies `p_stop >= xi^4 * omega_min`.
pub fn verify_base_lemma(
    ranges: &LemmaRanges,
    game: &GeneralizedBigMatch,
) -> Vec<LemmaViolation> {
    verify_base_lemma_with(ranges, game, None)
}

pub(crate) fn verify_base_lemma_with(
    ranges: &LemmaRanges,
    game: &GeneralizedBigMatch,
    coef_override: Option<&Rational>,
) -> Vec<LemmaViolation> {
    let mut violations = Vec::new();
    let k_int = game.max_abs().clone();
    let k_i32: i32 = (&k_int).try_into().unwrap_or(i32::MAX);
    let omega = game.min_stop().clone();
    for index in 0..=ranges.max_index {
        for xi in &ranges.xis {
            let one_minus = Rational::one() - xi;
            // xi^3 (1-xi)^(i-K+1)
            let slack = xi.pow(3) * one_minus.pow(index as i32 - k_i32 + 1);
            let win_scale = one_minus.pow(1 - 2 * k_i32);
            for len in 1..=ranges.max_len {
                for pattern in 0..(1u64 << len) {
                    let word: Vec<usize> =
                        (0..len).map(|b| ((pattern >> b) & 1) as usize).collect();
                    let dp = exact_stop_dp_capped(
                        index,
                        xi,
                        &word,
                        game,
                        ranges.max_len,
                        coef_override,
                    )
                    .expect("within cap");
                    // item 1
                    let bound = &slack + &win_scale * &dp.e_pos;
                    if dp.e_neg > bound {
                        violations.push(LemmaViolation {
                            index,
                            xi: xi.clone(),
                            word: word.clone(),
                            item: 1,
                            detail: format!("e_neg {} > bound {}", dp.e_neg, bound),
                        });
                    }
                    // item 2 applies when gdens(word) <= -2Ki/T
                    let gdens = generalized_density(game, &word).expect("nonempty");
                    let threshold = -rat(2)
                        * Rational::from_integer(k_int.clone())
                        * rat(index as i64)
                        / rat(len as i64);
                    if gdens <= threshold {
                        let floor = xi.pow(4) * &omega;
                        if dp.p_stop < floor {
                            violations.push(LemmaViolation {
                                index,
                                xi: xi.clone(),
                                word,
                                item: 2,
                                detail: format!("p_stop {} < floor {}", dp.p_stop, floor),
                            });
                        }
                    }
                }
            }
        }
    }
    violations
}

/// The Big Match specialization of the lemma checks: item 1 reads
/// `p_loss <= (1-xi)^i xi^3 + (1-xi)^-1 p_win`; item 2 applies to words
/// of density at most `1/2 - delta` with `T > i/(2 delta)` and forces
/// `p_win + p_loss >= xi^4`.
pub fn verify_base_lemma_big_match(ranges: &LemmaRanges) -> Vec<LemmaViolation> {
    verify_base_lemma_big_match_with(ranges, None)
}

pub(crate) fn verify_base_lemma_big_match_with(
    ranges: &LemmaRanges,
    coef_override: Option<&Rational>,
) -> Vec<LemmaViolation> {
    let mut violations = Vec::new();
    let half = Rational::new(1.into(), 2.into());
    for index in 0..=ranges.max_index {
        for xi in &ranges.xis {
            let one_minus = Rational::one() - xi;
            let slack = one_minus.pow(index as i32) * xi.pow(3);
            let win_scale = one_minus.clone().recip();
            for len in 1..=ranges.max_len {
                for pattern in 0..(1u64 << len) {
                    let word: Vec<usize> =
                        (0..len).map(|b| ((pattern >> b) & 1) as usize).collect();
                    let dp = exact_stop_dp_big_match_capped(
                        index,
                        xi,
                        &word,
                        ranges.max_len,
                        coef_override,
                    )
                    .expect("within cap");
                    let bound = &slack + &win_scale * &dp.p_win;
                    if dp.p_loss > bound {
                        violations.push(LemmaViolation {
                            index,
                            xi: xi.clone(),
                            word: word.clone(),
                            item: 1,
                            detail: format!("p_loss {} > bound {}", dp.p_loss, bound),
                        });
                    }
                    // strongest applicable delta: 1/2 - dens
                    let letters: Vec<bool> = word.iter().map(|&c| c == COL_L).collect();
                    let dens = crate::games::density(&letters).expect("nonempty");
                    let delta = &half - &dens;
                    if delta.is_positive()
                        && rat(len as i64) > rat(index as i64) / (rat(2) * &delta)
                    {
                        let floor = xi.pow(4);
                        let total = &dp.p_win + &dp.p_loss;
                        if total < floor {
                            violations.push(LemmaViolation {
                                index,
                                xi: xi.clone(),
                                word,
                                item: 2,
                                detail: format!("p_win+p_loss {total} < floor {floor}"),
                            });
                        }
                    }
                }
            }
        }
    }
    violations
}
