//! Finite plays and their payoff summaries.
//!
//! A stopped play is encoded by its stop round and outcome; the frozen
//! infinite tail of rewards is never materialized. For unstopped plays the
//! per-round rewards are kept as action-pair counts (exact averages over
//! a finite payoff alphabet), with dyadic checkpoint snapshots standing in
//! for the running-average sequence.

use super::AbsorbingGame;
use crate::numeric::Rational;
use num_traits::Zero;

/// Default smallest checkpoint round used by the liminf/limsup proxies.
pub const CHECKPOINT_FLOOR: u64 = 64;

/// One sampled round of the epoch/sub-epoch strategy: the `k`-th sample of
/// sub-epoch `j` in epoch `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplePoint {
    pub epoch: u32,
    pub sub_epoch: u32,
    pub sample_index: u64,
    pub round: u64,
}

/// One finite play.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub horizon: u64,
    /// Rounds actually played (equals `horizon` unless the play stopped).
    pub rounds_played: u64,
    pub stop_round: Option<u64>,
    pub outcome: Option<Rational>,
    /// Row-major `(row, col)` counts of played action pairs.
    pub action_counts: Vec<u64>,
    pub action_cols: usize,
    /// `(round, counts)` snapshots at the dyadic checkpoints of `horizon`.
    pub checkpoints: Vec<(u64, Vec<u64>)>,
    /// Largest encoded memory state visited (saturating at `u128::MAX`).
    pub max_state: u128,
    /// Largest encoded memory state per decade of rounds
    /// (`[10^d, 10^{d+1})`).
    pub memory_max_by_decade: Vec<(u32, u128)>,
    pub sample_log: Option<Vec<SamplePoint>>,
    /// Fair coin flips consumed by Player 1's strategy.
    pub bits_consumed: u64,
    /// Full action trace, recorded only in debug runs.
    pub actions: Option<Vec<(u16, u16)>>,
}

impl Transcript {
    fn average_from_counts(counts: &[u64], rounds: u64, g: &AbsorbingGame) -> Rational {
        debug_assert_eq!(counts.len(), g.rows() * g.cols());
        let mut sum = Rational::zero();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let c = counts[i * g.cols() + j];
                if c > 0 {
                    sum += g.payoff(i, j) * Rational::from_integer(c.into());
                }
            }
        }
        sum / Rational::from_integer(rounds.into())
    }

    /// Running average of rewards over the first `rounds` rounds, taken
    /// from the nearest stored snapshot. Panics if no snapshot matches.
    pub fn running_average(&self, rounds: u64, g: &AbsorbingGame) -> Rational {
        if rounds == self.rounds_played {
            return Self::average_from_counts(&self.action_counts, rounds, g);
        }
        let (_, counts) = self
            .checkpoints
            .iter()
            .find(|(r, _)| *r == rounds)
            .expect("no checkpoint snapshot at requested round");
        Self::average_from_counts(counts, rounds, g)
    }

    fn checkpoint_rounds(&self, floor: u64) -> Vec<u64> {
        let t = self.horizon;
        let min_round = if t >= floor { floor } else { 1 };
        let mut rounds: Vec<u64> = self
            .checkpoints
            .iter()
            .map(|(r, _)| *r)
            .filter(|&r| r >= min_round && r < t)
            .collect();
        rounds.push(t);
        rounds
    }
}

/// Payoff of a finite play: the outcome when the play stopped, otherwise
/// the terminal running average.
pub fn finite_payoff(tr: &Transcript, g: &AbsorbingGame) -> Rational {
    match &tr.outcome {
        Some(v) => v.clone(),
        None => Transcript::average_from_counts(&tr.action_counts, tr.horizon, g),
    }
}

/// Finite-horizon liminf proxy: minimum running average over the dyadic
/// checkpoints `floor(T/2^a) >= floor` (all checkpoints when `T < floor`)
/// plus the terminal average. Stopped plays evaluate to their outcome.
pub fn liminf_proxy(tr: &Transcript, g: &AbsorbingGame, floor: u64) -> Rational {
    match &tr.outcome {
        Some(v) => v.clone(),
        None => tr
            .checkpoint_rounds(floor)
            .into_iter()
            .map(|r| tr.running_average(r, g))
            .min()
            .expect("at least the terminal average"),
    }
}

/// Finite-horizon limsup proxy; see [`liminf_proxy`].
pub fn limsup_proxy(tr: &Transcript, g: &AbsorbingGame, floor: u64) -> Rational {
    match &tr.outcome {
        Some(v) => v.clone(),
        None => tr
            .checkpoint_rounds(floor)
            .into_iter()
            .map(|r| tr.running_average(r, g))
            .max()
            .expect("at least the terminal average"),
    }
}

/// The dyadic checkpoint rounds of a horizon, descending: `floor(T/2^a)`
/// for `a = 0..=log2(T)`, deduplicated, excluding `T` itself.
pub fn dyadic_checkpoints(horizon: u64) -> Vec<u64> {
    let mut rounds = Vec::new();
    let mut a = 1u32;
    loop {
        let r = horizon >> a;
        if r == 0 {
            break;
        }
        if rounds.last() != Some(&r) {
            rounds.push(r);
        }
        a += 1;
    }
    rounds
}
