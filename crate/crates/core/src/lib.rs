//! Exact solvers and space-efficient strategies for repeated games with
//! absorbing states.
//!
//! The crate is organized around the Big Match and its generalizations:
//!
//! * [`numeric`] — arbitrary-precision rationals, dense polynomials,
//!   fraction-free determinants and polynomial root-magnitude bounds.
//! * [`games`] — matrix games, repeated games with absorbing states in
//!   matrix form, generalized Big Match games, plays and payoffs.
//! * [`solver`] — exact-rational linear programming: matrix-game values
//!   with certificates, marginal values, parametric bases, value
//!   approximation by bisection, and the reduction of absorbing games to
//!   generalized Big Match games.
//! * [`strategies`] — memory-based Player 1 strategies: the counting base
//!   strategies, the epoch/sub-epoch sampled strategy, the never-stopping
//!   observer, and strategies lifted through the reduction.
//! * [`adversaries`] — deterministic and randomized Player 2 opponents.
//! * [`sim`] — the reproducible play engine, batch Monte Carlo runs,
//!   exact dynamic-programming oracles and tail-bound helpers.

pub mod adversaries;
pub mod games;
pub mod numeric;
pub mod sim;
pub mod solver;
pub mod strategies;

pub use numeric::{parse_rational, Rational};
