//! The optimal-strategy pair `x`, `x(t2)` with per-column closeness
//! guarantees.
//!
//! For the family `A'(0,t)` built from an absorbing game, a basis optimal
//! at `t2 = (6k((m+1)2^(tau+1))^(2(m+1)))^(-1)` (with `eta = 1/k`) yields
//! a strategy `x(t2)` and its limit `x` at `t -> 0+` such that for every
//! column `j`, either the absorption mass `w_j` under `x` is positive and
//! the absorbed payoff moves by less than `eta`, or `w_j = 0` and both the
//! absorption mass at `t2` and the non-absorbed payoff movement stay below
//! `eta`.

use super::parametric::{build_anchored, scaled_bitsize, ParametricGame, ThresholdMode};
use super::{limit_strategy, SolverError};
use crate::games::{auxiliary_split, AbsorbingGame};
use crate::numeric::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Per-column aggregates of a fixed row mixture `x`:
/// `stop_j = sum_i x_i w_ij`, `absorbed_j` the expected payoff conditioned
/// on absorbing, `continued_j` the expected payoff conditioned on not
/// absorbing (0 where the conditioning event is empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnAggregates {
    pub stop: Vec<Rational>,
    pub absorbed: Vec<Rational>,
    pub continued: Vec<Rational>,
}

pub fn column_aggregates(g: &AbsorbingGame, x: &[Rational]) -> ColumnAggregates {
    assert_eq!(x.len(), g.rows());
    let one = Rational::one();
    let mut stop = Vec::with_capacity(g.cols());
    let mut absorbed = Vec::with_capacity(g.cols());
    let mut continued = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let w: Rational = (0..g.rows()).map(|i| &x[i] * g.stop_prob(i, j)).sum();
        let wb: Rational = (0..g.rows())
            .map(|i| &x[i] * g.stop_prob(i, j) * g.payoff(i, j))
            .sum();
        let cb: Rational = (0..g.rows())
            .map(|i| &x[i] * &(&one - g.stop_prob(i, j)) * g.payoff(i, j))
            .sum();
        absorbed.push(if w.is_zero() {
            Rational::zero()
        } else {
            &wb / &w
        });
        continued.push(if w == one {
            Rational::zero()
        } else {
            &cb / &(&one - &w)
        });
        stop.push(w);
    }
    ColumnAggregates {
        stop,
        absorbed,
        continued,
    }
}

#[derive(Debug, Clone)]
pub struct KohlbergPair {
    pub x: Vec<Rational>,
    pub x_t2: Vec<Rational>,
    pub t2: Rational,
    pub eta: Rational,
    pub at_limit: ColumnAggregates,
    pub at_t2: ColumnAggregates,
    pub parametric: ParametricGame,
}

/// Computes the pair for `eta = 1/k`, verifying the closeness properties
/// as postconditions.
pub fn kohlberg_pair(
    g: &AbsorbingGame,
    eta: &Rational,
    mode: ThresholdMode,
) -> Result<KohlbergPair, SolverError> {
    if !eta.is_positive() || eta.numer() != &BigInt::one() {
        return Err(SolverError::InvalidInput(
            "eta must be the reciprocal of a positive integer".into(),
        ));
    }
    let k = eta.denom().clone();
    let (a0, a1) = auxiliary_split(g, &Rational::zero());
    let (_, tau) = scaled_bitsize(&a0, &a1);
    let m = g.rows();
    // t2 = (6k((m+1)2^(tau+1))^(2(m+1)))^(-1)
    let base = BigInt::from(m as u64 + 1) * (BigInt::one() << (tau + 1));
    let t2 = Rational::new(
        BigInt::one(),
        BigInt::from(6u8) * k * base.pow(2 * (m as u32 + 1)),
    );

    let pg = build_anchored(&a0, &a1, t2.clone(), mode)?;
    let (x_t2, _) = pg.evaluate(&t2);
    let x = limit_strategy(&pg)?;

    let at_limit = column_aggregates(g, &x);
    let at_t2 = column_aggregates(g, &x_t2);
    for j in 0..g.cols() {
        let ok = if at_limit.stop[j].is_positive() {
            at_t2.stop[j].is_positive()
                && (&at_limit.absorbed[j] - &at_t2.absorbed[j]).abs() < *eta
        } else {
            &at_t2.stop[j] < eta
                && (&at_limit.continued[j] - &at_t2.continued[j]).abs() < *eta
        };
        if !ok {
            return Err(SolverError::PostconditionViolated(format!(
                "column {j} violates the closeness properties"
            )));
        }
    }

    Ok(KohlbergPair {
        x,
        x_t2,
        t2,
        eta: eta.clone(),
        at_limit,
        at_t2,
        parametric: pg,
    })
}
