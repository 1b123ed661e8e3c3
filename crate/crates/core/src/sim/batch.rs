//! Batched replica runs with deterministic aggregation.

use super::engine::{run_play, EpochBits, PlaySetup, RecordFlags};
use super::SimError;
use crate::adversaries::Adversary;
use crate::games::{finite_payoff, liminf_proxy, limsup_proxy, AbsorbingGame, Transcript};
use crate::numeric::{rat, Rational};
use crate::strategies::MemoryStrategy;
use num_traits::Zero;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct SimConfig<'a> {
    pub game: &'a AbsorbingGame,
    pub p2: &'a Adversary,
    pub horizon: u64,
    pub replicas: u64,
    pub seed: u64,
    pub record: RecordFlags,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    /// Keep per-replica transcripts (memory heavy).
    pub keep_transcripts: bool,
    /// Checkpoint floor for the liminf/limsup proxies.
    pub proxy_floor: u64,
}

impl<'a> SimConfig<'a> {
    pub fn new(game: &'a AbsorbingGame, p2: &'a Adversary, horizon: u64, replicas: u64) -> Self {
        SimConfig {
            game,
            p2,
            horizon,
            replicas,
            seed: 0,
            record: RecordFlags::default(),
            threads: 0,
            keep_transcripts: false,
            proxy_floor: crate::games::CHECKPOINT_FLOOR,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReplicaStats {
    pub payoff: Rational,
    pub liminf: Rational,
    pub limsup: Rational,
    pub stopped: bool,
    pub stop_round: Option<u64>,
    pub outcome: Option<Rational>,
    pub max_state: u128,
    pub bits_per_round: Rational,
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub replicas: Vec<ReplicaStats>,
    pub mean_payoff: Rational,
    pub mean_liminf: Rational,
    pub mean_limsup: Rational,
    pub stop_rate: Rational,
    /// Mean outcome over stopped replicas, when any stopped.
    pub conditional_outcome_mean: Option<Rational>,
    /// Aggregated `(epoch, rounds, bits)` over all replicas.
    pub epoch_bits: Vec<(u32, u64, u64)>,
    pub transcripts: Option<Vec<Transcript>>,
}

impl SimReport {
    /// The `q`-quantile (0..=100) of the per-replica max state index.
    pub fn max_state_percentile(&self, q: u32) -> u128 {
        let mut values: Vec<u128> = self.replicas.iter().map(|r| r.max_state).collect();
        values.sort_unstable();
        let idx = ((values.len() as u64 * u64::from(q)).div_ceil(100)).max(1) as usize - 1;
        values[idx.min(values.len() - 1)]
    }

    /// Amortized bits per round over epochs `>= min_epoch`.
    pub fn bits_per_round_from_epoch(&self, min_epoch: u32) -> Option<Rational> {
        let (rounds, bits) = self
            .epoch_bits
            .iter()
            .filter(|(e, _, _)| *e >= min_epoch)
            .fold((0u64, 0u64), |(r, b), (_, rr, bb)| (r + rr, b + bb));
        (rounds > 0).then(|| Rational::new(bits.into(), rounds.into()))
    }
}

/// Runs independent replicas (parallel when a pool is available) and
/// aggregates deterministically; replica `r` uses streams derived from
/// `(seed, r)`, so the report does not depend on scheduling.
pub fn run_batch<S>(p1: &S, cfg: &SimConfig<'_>) -> Result<SimReport, SimError>
where
    S: MemoryStrategy + Sync,
    S::State: Send,
{
    let setup = PlaySetup {
        game: cfg.game,
        p1,
        p2: cfg.p2,
        horizon: cfg.horizon,
        record: cfg.record,
    };
    let run_one = |r: u64| -> Result<(Transcript, EpochBits), SimError> {
        run_play(&setup, cfg.seed, r)
    };
    let results: Result<Vec<(Transcript, EpochBits)>, SimError> = if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| SimError::InvalidParameter(e.to_string()))?;
        pool.install(|| (0..cfg.replicas).into_par_iter().map(run_one).collect())
    } else {
        (0..cfg.replicas).into_par_iter().map(run_one).collect()
    };
    let results = results?;

    let mut replicas = Vec::with_capacity(results.len());
    let mut epoch_bits: Vec<(u32, u64, u64)> = Vec::new();
    let mut transcripts = cfg.keep_transcripts.then(Vec::new);
    for (tr, eb) in results {
        let payoff = finite_payoff(&tr, cfg.game);
        let stats = ReplicaStats {
            liminf: liminf_proxy(&tr, cfg.game, cfg.proxy_floor),
            limsup: limsup_proxy(&tr, cfg.game, cfg.proxy_floor),
            stopped: tr.stop_round.is_some(),
            stop_round: tr.stop_round,
            outcome: tr.outcome.clone(),
            max_state: tr.max_state,
            bits_per_round: Rational::new(
                tr.bits_consumed.into(),
                tr.rounds_played.max(1).into(),
            ),
            payoff,
        };
        for (e, rounds, bits) in eb {
            match epoch_bits.iter_mut().find(|(ee, _, _)| *ee == e) {
                Some(slot) => {
                    slot.1 += rounds;
                    slot.2 += bits;
                }
                None => epoch_bits.push((e, rounds, bits)),
            }
        }
        if let Some(ts) = transcripts.as_mut() {
            ts.push(tr);
        }
        replicas.push(stats);
    }
    epoch_bits.sort_unstable_by_key(|(e, _, _)| *e);

    let n = rat(replicas.len() as i64);
    let mean_payoff = replicas.iter().map(|r| r.payoff.clone()).sum::<Rational>() / &n;
    let mean_liminf = replicas.iter().map(|r| r.liminf.clone()).sum::<Rational>() / &n;
    let mean_limsup = replicas.iter().map(|r| r.limsup.clone()).sum::<Rational>() / &n;
    let stopped = replicas.iter().filter(|r| r.stopped).count();
    let stop_rate = rat(stopped as i64) / &n;
    let conditional_outcome_mean = (stopped > 0).then(|| {
        replicas
            .iter()
            .filter_map(|r| r.outcome.clone())
            .sum::<Rational>()
            / rat(stopped as i64)
    });

    Ok(SimReport {
        replicas,
        mean_payoff,
        mean_liminf,
        mean_limsup,
        stop_rate,
        conditional_outcome_mean,
        epoch_bits,
        transcripts,
    })
}

impl SimReport {
    pub fn is_zero_replicas(&self) -> bool {
        self.replicas.is_empty() && self.mean_payoff.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::parse_p2_spec;
    use crate::numeric::ratio;
    use crate::strategies::StationaryStrategy;

    #[test]
    fn report_is_reproducible() {
        let game = AbsorbingGame::big_match();
        let p2 = parse_p2_spec("phase:eps=1/10,k=2").unwrap();
        let p1 = StationaryStrategy::big_match(&ratio(1, 9)).unwrap();
        let mut cfg = SimConfig::new(&game, &p2, 500, 40);
        cfg.seed = 11;
        let a = run_batch(&p1, &cfg).unwrap();
        let b = run_batch(&p1, &cfg).unwrap();
        assert_eq!(a.mean_payoff, b.mean_payoff);
        assert_eq!(a.stop_rate, b.stop_rate);
        for (x, y) in a.replicas.iter().zip(&b.replicas) {
            assert_eq!(x.payoff, y.payoff);
            assert_eq!(x.stop_round, y.stop_round);
        }
    }

    #[test]
    fn const_l_against_pure_l_player_pays_one() {
        let game = AbsorbingGame::big_match();
        let p2 = parse_p2_spec("constL").unwrap();
        let p1 = StationaryStrategy::big_match(&ratio(0, 1)).unwrap();
        let cfg = SimConfig::new(&game, &p2, 256, 10);
        let report = run_batch(&p1, &cfg).unwrap();
        assert_eq!(report.mean_payoff, ratio(1, 1));
        assert_eq!(report.stop_rate, ratio(0, 1));
    }
}
