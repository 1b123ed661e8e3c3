//! Materializing Player 1 strategy specs: file loading and construction.

use bigmatch_core::games::{AbsorbingGame, GeneralizedBigMatch};
use bigmatch_core::numeric::ratio;
use bigmatch_core::solver::parse_reduction;
use bigmatch_core::strategies::{
    full_strategy, lifted_strategy, observer_variant, parse_p1_spec, BaseStrategy,
    EpochSchedule, FullStrategy, LiftedStrategy, SampleMode, ScheduleSpec, StationaryStrategy,
    StrategySpec,
};
use std::path::PathBuf;

pub enum Player1 {
    Base(BaseStrategy),
    Full(FullStrategy),
    Lifted(LiftedStrategy),
    Stationary(StationaryStrategy),
}

fn load_schedule(spec: &ScheduleSpec, inputs: &mut Vec<PathBuf>) -> Result<EpochSchedule, String> {
    match spec {
        ScheduleSpec::LogLog => Ok(EpochSchedule::loglog()),
        ScheduleSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read schedule {path}: {e}"))?;
            inputs.push(PathBuf::from(path));
            let mut pairs = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
                if line.is_empty() {
                    continue;
                }
                let mut it = line.split_whitespace();
                let t: u64 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("{path}:{}: bad round", lineno + 1))?;
                let f: u64 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("{path}:{}: bad budget", lineno + 1))?;
                pairs.push((t, f));
            }
            EpochSchedule::from_f(&pairs).map_err(|e| e.to_string())
        }
    }
}

/// Builds a Player 1 strategy from its spec string; returns the strategy
/// and any extra input files consulted (for the run manifest).
pub fn build_p1(
    spec: &str,
    game: &AbsorbingGame,
    block_mode: bool,
) -> Result<(Player1, Vec<PathBuf>), String> {
    let parsed = parse_p1_spec(spec).map_err(|e| e.to_string())?;
    let mode = if block_mode {
        SampleMode::Gaps
    } else {
        SampleMode::PerRound
    };
    let mut inputs = Vec::new();
    let p1 = materialize(&parsed, game, mode, &mut inputs)?;
    Ok((p1, inputs))
}

fn materialize(
    spec: &StrategySpec,
    game: &AbsorbingGame,
    mode: SampleMode,
    inputs: &mut Vec<PathBuf>,
) -> Result<Player1, String> {
    match spec {
        StrategySpec::Base { index, xi } => {
            let gbm = GeneralizedBigMatch::new(game.clone()).map_err(|e| e.to_string())?;
            Ok(Player1::Base(
                BaseStrategy::new(*index, xi, &gbm).map_err(|e| e.to_string())?,
            ))
        }
        StrategySpec::Classic { xi } => {
            let gbm = GeneralizedBigMatch::new(game.clone()).map_err(|e| e.to_string())?;
            Ok(Player1::Base(
                BaseStrategy::classic(xi, &gbm).map_err(|e| e.to_string())?,
            ))
        }
        StrategySpec::Full { eps, sched } => {
            let gbm = GeneralizedBigMatch::new(game.clone()).map_err(|e| e.to_string())?;
            let schedule = load_schedule(sched, inputs)?;
            Ok(Player1::Full(
                full_strategy(eps, schedule, &gbm, mode).map_err(|e| e.to_string())?,
            ))
        }
        StrategySpec::Observer(inner) => match materialize(inner, game, mode, inputs)? {
            Player1::Full(full) => Ok(Player1::Full(observer_variant(&full))),
            _ => Err("observer: the inner spec must be a full strategy".into()),
        },
        StrategySpec::Lifted { reduction_path } => {
            let text = std::fs::read_to_string(reduction_path)
                .map_err(|e| format!("cannot read reduction {reduction_path}: {e}"))?;
            inputs.push(PathBuf::from(reduction_path));
            let reduction = parse_reduction(&text).map_err(|e| e.to_string())?;
            let inner = match &reduction.d_game {
                Some(d) if reduction.pure_row.is_none() => Some(
                    full_strategy(&ratio(1, 5), EpochSchedule::loglog(), d, mode)
                        .map_err(|e| e.to_string())?,
                ),
                _ => None,
            };
            Ok(Player1::Lifted(
                lifted_strategy(inner, &reduction).map_err(|e| e.to_string())?,
            ))
        }
        StrategySpec::Stationary { q } => Ok(Player1::Stationary(
            StationaryStrategy::big_match(q).map_err(|e| e.to_string())?,
        )),
    }
}
