//! Lifting a generalized Big Match strategy back to the original game.
//!
//! The inner strategy acts over the reduced two-row game: an inner L
//! resolves to a row of the original game drawn from the limit mixture
//! `x`, an inner R to a row drawn from `x(t2)`. The update map filters:
//! columns kept by the reduction pass through to the inner update
//! (re-indexed), all other columns leave the memory unchanged. When the
//! reduced derived game has a pure optimal row (or no column is kept),
//! the lift degenerates to playing the corresponding mixture every round.

use super::{Dist, FullState, FullStrategy, MemoryStrategy, StrategyError};
use crate::games::{ROW_L, ROW_R};
use crate::numeric::Rational;
use crate::sim::FairBits;
use crate::solver::ReductionOutput;
use num_traits::One;

#[derive(Debug, Clone)]
enum Policy {
    Inner(Box<FullStrategy>),
    Stationary(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftedState {
    Inner(FullState),
    Stationary,
}

#[derive(Debug, Clone)]
pub struct LiftedStrategy {
    policy: Policy,
    x: Vec<Rational>,
    x_t2: Vec<Rational>,
    /// Original column index -> inner column index, for kept columns.
    col_to_inner: Vec<Option<usize>>,
    rows: usize,
}

/// Builds the lifted strategy from a reduction and the inner strategy for
/// the reduced game (ignored when the reduction degenerates).
pub fn lifted_strategy(
    inner: Option<FullStrategy>,
    reduction: &ReductionOutput,
) -> Result<LiftedStrategy, StrategyError> {
    let rows = reduction.x.len();
    let n_cols = reduction.c_game.cols();
    let mut col_to_inner = vec![None; n_cols];
    for (inner_idx, &j) in reduction.columns_j.iter().enumerate() {
        if j >= n_cols {
            return Err(StrategyError::InvalidAction(format!(
                "kept column {j} out of range"
            )));
        }
        col_to_inner[j] = Some(inner_idx);
    }

    let policy = match (&reduction.d_game, reduction.pure_row) {
        (None, _) => Policy::Stationary(reduction.x.clone()),
        (Some(_), Some(ROW_L)) => Policy::Stationary(reduction.x.clone()),
        (Some(_), Some(_)) => Policy::Stationary(reduction.x_t2.clone()),
        (Some(_), None) => {
            let inner = inner.ok_or_else(|| {
                StrategyError::InvalidParameter(
                    "an inner strategy is required when the reduction is not degenerate"
                        .into(),
                )
            })?;
            if inner.opp_actions() != reduction.columns_j.len() {
                return Err(StrategyError::InvalidAction(format!(
                    "inner strategy expects {} columns, reduction keeps {}",
                    inner.opp_actions(),
                    reduction.columns_j.len()
                )));
            }
            Policy::Inner(Box::new(inner))
        }
    };

    Ok(LiftedStrategy {
        policy,
        x: reduction.x.clone(),
        x_t2: reduction.x_t2.clone(),
        col_to_inner,
        rows,
    })
}

impl LiftedStrategy {
    fn mixture_for(&self, inner_action: usize) -> &[Rational] {
        if inner_action == ROW_R {
            &self.x_t2
        } else {
            &self.x
        }
    }

    pub fn is_stationary(&self) -> bool {
        matches!(self.policy, Policy::Stationary(_))
    }

    pub fn stationary_mixture(&self) -> Option<&[Rational]> {
        match &self.policy {
            Policy::Stationary(mix) => Some(mix),
            Policy::Inner(_) => None,
        }
    }
}

impl MemoryStrategy for LiftedStrategy {
    type State = LiftedState;

    fn start_state(&self) -> LiftedState {
        match &self.policy {
            Policy::Inner(inner) => LiftedState::Inner(inner.start_state()),
            Policy::Stationary(_) => LiftedState::Stationary,
        }
    }

    fn own_actions(&self) -> usize {
        self.rows
    }

    fn opp_actions(&self) -> usize {
        self.col_to_inner.len()
    }

    fn action_dist(&self, state: &LiftedState) -> Dist<usize> {
        match (&self.policy, state) {
            (Policy::Stationary(mix), _) => {
                Dist::new(mix.iter().cloned().enumerate().collect())
            }
            (Policy::Inner(inner), LiftedState::Inner(s)) => {
                let inner_dist = inner.action_dist(s);
                let p_r = inner_dist.probability_of(|&a| a == ROW_R);
                let p_l = Rational::one() - &p_r;
                let probs: Vec<(usize, Rational)> = (0..self.rows)
                    .map(|r| (r, &p_l * &self.x[r] + &p_r * &self.x_t2[r]))
                    .collect();
                Dist::new(probs)
            }
            _ => unreachable!("state kind mismatch"),
        }
    }

    fn update_dist(&self, own: usize, opp: usize, state: &LiftedState) -> Dist<LiftedState> {
        match (&self.policy, state) {
            (Policy::Stationary(_), _) => Dist::point(LiftedState::Stationary),
            (Policy::Inner(inner), LiftedState::Inner(s)) => match self.col_to_inner.get(opp) {
                Some(Some(inner_col)) => {
                    let d = inner.update_dist(own, *inner_col, s);
                    Dist::new(
                        d.items()
                            .iter()
                            .map(|(next, p)| (LiftedState::Inner(next.clone()), p.clone()))
                            .collect(),
                    )
                }
                Some(None) => Dist::point(LiftedState::Inner(s.clone())),
                None => panic!("opponent column {opp} out of range"),
            },
            _ => unreachable!("state kind mismatch"),
        }
    }

    fn state_code(&self, state: &LiftedState) -> u128 {
        match (&self.policy, state) {
            (Policy::Inner(inner), LiftedState::Inner(s)) => inner.state_code(s),
            _ => 0,
        }
    }

    fn decode_state(&self, code: u128) -> Option<LiftedState> {
        match &self.policy {
            Policy::Inner(inner) => inner.decode_state(code).map(LiftedState::Inner),
            Policy::Stationary(_) => (code == 0).then_some(LiftedState::Stationary),
        }
    }

    fn sample_action(&self, state: &LiftedState, bits: &mut FairBits) -> usize {
        let mixture: &[Rational] = match (&self.policy, state) {
            (Policy::Stationary(mix), _) => mix,
            (Policy::Inner(inner), LiftedState::Inner(s)) => {
                let inner_action = inner.sample_action(s, bits);
                self.mixture_for(inner_action)
            }
            _ => unreachable!("state kind mismatch"),
        };
        sample_mixture(mixture, bits)
    }

    fn advance(&self, state: &mut LiftedState, own: usize, opp: usize, bits: &mut FairBits) {
        if let (Policy::Inner(inner), LiftedState::Inner(s)) = (&self.policy, &mut *state) {
            match self.col_to_inner.get(opp) {
                Some(Some(inner_col)) => inner.advance(s, own, *inner_col, bits),
                Some(None) => {}
                None => panic!("opponent column {opp} out of range"),
            }
        }
    }

    fn sample_point(&self, state: &LiftedState) -> Option<(u32, u32, u64)> {
        match (&self.policy, state) {
            (Policy::Inner(inner), LiftedState::Inner(s)) => inner.sample_point(s),
            _ => None,
        }
    }

    fn epoch_of(&self, state: &LiftedState) -> u32 {
        match (&self.policy, state) {
            (Policy::Inner(inner), LiftedState::Inner(s)) => inner.epoch_of(s),
            _ => 1,
        }
    }
}

fn sample_mixture(mixture: &[Rational], bits: &mut FairBits) -> usize {
    // skip certain prefix zeros / a certain single row cheaply
    if let Some(r) = mixture.iter().position(|p| p.is_one()) {
        return r;
    }
    bits.sample_index(mixture)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::AbsorbingGame;
    use crate::numeric::ratio;
    use crate::sim::{derive_stream, FairBits};
    use crate::solver::{reduce, ThresholdMode};
    use crate::strategies::{full_strategy, EpochSchedule, SampleMode};

    fn big_match_lift() -> (LiftedStrategy, crate::solver::ReductionOutput) {
        let g = AbsorbingGame::big_match();
        let r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        let inner = full_strategy(
            &ratio(1, 5),
            EpochSchedule::loglog(),
            r.d_game.as_ref().unwrap(),
            SampleMode::PerRound,
        )
        .unwrap();
        (lifted_strategy(Some(inner), &r).unwrap(), r)
    }

    #[test]
    fn filtered_columns_leave_memory_unchanged() {
        // Build a fake reduction with one filtered column by dropping a
        // kept column from the Big Match reduction.
        let g = AbsorbingGame::big_match();
        let mut r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        // keep only original column 1; column 0 is filtered
        r.columns_j = vec![1];
        let d = r.d_game.as_ref().unwrap().game();
        let d1 = crate::games::parse_game(&crate::games::render_game(d))
            .unwrap();
        // restrict D to one column to stay consistent
        let payoff = crate::numeric::Matrix::from_rows(vec![
            vec![d1.payoff(0, 1).clone()],
            vec![d1.payoff(1, 1).clone()],
        ]);
        let stop = crate::numeric::Matrix::from_rows(vec![
            vec![d1.stop_prob(0, 1).clone()],
            vec![d1.stop_prob(1, 1).clone()],
        ]);
        let restricted = AbsorbingGame::new(payoff, stop).unwrap();
        r.d_game = Some(crate::games::GeneralizedBigMatch::new(restricted).unwrap());
        r.pure_row = None;
        let inner = full_strategy(
            &ratio(1, 5),
            EpochSchedule::loglog(),
            r.d_game.as_ref().unwrap(),
            SampleMode::PerRound,
        );
        // the restricted game may fail the assumption; fall back to a
        // stationary policy in that case and only test the filtering of
        // the nondegenerate path
        let Ok(inner) = inner else { return };
        let lifted = lifted_strategy(Some(inner), &r).unwrap();
        let s0 = lifted.start_state();
        let d = lifted.update_dist(ROW_L, 0, &s0);
        assert!(d.is_degenerate());
        assert_eq!(d.items()[0].0, s0);
    }

    #[test]
    fn kept_columns_delegate_to_inner() {
        let (lifted, _r) = big_match_lift();
        let s0 = lifted.start_state();
        // column 0 maps to inner column 0: the update distribution is the
        // inner one, re-wrapped
        let d = lifted.update_dist(ROW_L, 0, &s0);
        assert!(!d.items().is_empty());
        for (next, _) in d.items() {
            assert!(matches!(next, LiftedState::Inner(_)));
        }
    }

    #[test]
    fn action_mixes_x_and_x_t2() {
        let (lifted, r) = big_match_lift();
        let s0 = lifted.start_state();
        let d = lifted.action_dist(&s0);
        // at the start the inner plays L surely (not sampled), so the
        // outer mixture is exactly x
        for (row, p) in d.items() {
            assert_eq!(p, &r.x[*row]);
        }
    }

    #[test]
    fn pure_branch_yields_stationary_play() {
        let g = AbsorbingGame::big_match();
        let mut r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        r.pure_row = Some(ROW_R);
        let lifted = lifted_strategy(None, &r).unwrap();
        assert!(lifted.is_stationary());
        assert_eq!(lifted.stationary_mixture().unwrap(), &r.x_t2[..]);
        let mut bits = FairBits::new(derive_stream(1, 2, 3));
        let mut state = lifted.start_state();
        let a = lifted.sample_action(&state, &mut bits);
        assert!(a < 2);
        lifted.advance(&mut state, a, 0, &mut bits);
        assert_eq!(state, LiftedState::Stationary);
    }
}
