//! Sequential execution of one play.

use super::{derive_stream, FairBits, SimError};
use crate::adversaries::Adversary;
use crate::games::{dyadic_checkpoints, AbsorbingGame, SamplePoint, Transcript};
use crate::strategies::MemoryStrategy;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, Default)]
pub struct RecordFlags {
    /// Track the maximum encoded memory state (total and per decade).
    pub memory: bool,
    /// Record the sample-point log.
    pub samples: bool,
    /// Account Player 1's fair bits per epoch.
    pub bits: bool,
    /// Keep the full action trace (debug only; memory heavy).
    pub actions: bool,
}

impl RecordFlags {
    pub fn all() -> Self {
        RecordFlags {
            memory: true,
            samples: true,
            bits: true,
            actions: true,
        }
    }
}

pub struct PlaySetup<'a, S: MemoryStrategy> {
    pub game: &'a AbsorbingGame,
    pub p1: &'a S,
    pub p2: &'a Adversary,
    pub horizon: u64,
    pub record: RecordFlags,
}

/// Per-epoch bit accounting: `(epoch, rounds, bits)`.
pub type EpochBits = Vec<(u32, u64, u64)>;

/// Runs one play to absorption or the horizon. Deterministic given
/// `(setup, master_seed, replica)`.
pub fn run_play<S: MemoryStrategy>(
    setup: &PlaySetup<'_, S>,
    master_seed: u64,
    replica: u64,
) -> Result<(Transcript, EpochBits), SimError> {
    let game = setup.game;
    let p1 = setup.p1;
    if p1.own_actions() != game.rows() || p1.opp_actions() != game.cols() {
        return Err(SimError::StrategyContractViolation(format!(
            "strategy shape {}x{} does not match game {}x{}",
            p1.own_actions(),
            p1.opp_actions(),
            game.rows(),
            game.cols()
        )));
    }
    let n = game.cols();
    let horizon = setup.horizon.max(1);

    let mut bits1 = FairBits::new(derive_stream(master_seed, replica, 0));
    let mut bits2 = FairBits::new(derive_stream(master_seed, replica, 1));
    let mut bits_abs = FairBits::new(derive_stream(master_seed, replica, 2));

    let mut state = p1.start_state();
    let mut counts = vec![0u64; game.rows() * n];
    let mut checkpoint_rounds = dyadic_checkpoints(horizon);
    checkpoint_rounds.reverse(); // ascending
    let mut next_checkpoint = 0usize;
    let mut checkpoints = Vec::with_capacity(checkpoint_rounds.len());

    let mut stop_round = None;
    let mut outcome = None;
    let mut rounds_played = horizon;

    let mut max_state = 0u128;
    let mut decade_max: Vec<u128> = Vec::new();
    let mut sample_log = setup.record.samples.then(Vec::new);
    let mut actions = setup.record.actions.then(Vec::new);
    let mut epoch_bits: Vec<(u64, u64)> = Vec::new(); // indexed by epoch
    let mut prev_consumed = 0u64;

    for t in 1..=horizon {
        let a1 = p1.sample_action(&state, &mut bits1);
        let a2 = setup.p2.act(t, &mut bits2);
        counts[a1 * n + a2] += 1;

        if setup.record.memory {
            let code = p1.state_code(&state);
            max_state = max_state.max(code);
            let decade = decade_of(t);
            if decade_max.len() <= decade {
                decade_max.resize(decade + 1, 0);
            }
            decade_max[decade] = decade_max[decade].max(code);
        }
        if let Some(log) = sample_log.as_mut() {
            if let Some((epoch, sub_epoch, sample_index)) = p1.sample_point(&state) {
                log.push(SamplePoint {
                    epoch,
                    sub_epoch,
                    sample_index,
                    round: t,
                });
            }
        }
        if let Some(trace) = actions.as_mut() {
            trace.push((a1 as u16, a2 as u16));
        }

        while next_checkpoint < checkpoint_rounds.len() && checkpoint_rounds[next_checkpoint] == t
        {
            checkpoints.push((t, counts.clone()));
            next_checkpoint += 1;
        }

        let w = game.stop_prob(a1, a2);
        let stopped = if w.is_zero() {
            false
        } else if w.is_one() {
            true
        } else {
            bits_abs.bernoulli(w)
        };
        if stopped {
            stop_round = Some(t);
            outcome = Some(game.payoff(a1, a2).clone());
            rounds_played = t;
            break;
        }

        if setup.record.bits {
            let epoch = p1.epoch_of(&state) as usize;
            if epoch_bits.len() <= epoch {
                epoch_bits.resize(epoch + 1, (0, 0));
            }
            let consumed = bits1.consumed();
            epoch_bits[epoch].0 += 1;
            epoch_bits[epoch].1 += consumed - prev_consumed;
            prev_consumed = consumed;
            p1.advance(&mut state, a1, a2, &mut bits1);
            // attribute the advance-draw to the epoch of the round too
            let consumed = bits1.consumed();
            epoch_bits[epoch].1 += consumed - prev_consumed;
            prev_consumed = consumed;
        } else {
            p1.advance(&mut state, a1, a2, &mut bits1);
        }
    }

    let transcript = Transcript {
        horizon,
        rounds_played,
        stop_round,
        outcome,
        action_counts: counts,
        action_cols: n,
        checkpoints,
        max_state,
        memory_max_by_decade: decade_max
            .into_iter()
            .enumerate()
            .map(|(d, m)| (d as u32, m))
            .collect(),
        sample_log,
        bits_consumed: bits1.consumed(),
        actions,
    };
    let epoch_bits = epoch_bits
        .into_iter()
        .enumerate()
        .filter(|(_, (rounds, _))| *rounds > 0)
        .map(|(e, (rounds, b))| (e as u32, rounds, b))
        .collect();
    Ok((transcript, epoch_bits))
}

fn decade_of(t: u64) -> usize {
    // 1..=9 -> 0, 10..=99 -> 1, ...
    let mut d = 0usize;
    let mut bound = 10u64;
    while t >= bound {
        d += 1;
        bound = bound.saturating_mul(10);
    }
    d
}
