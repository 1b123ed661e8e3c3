//! Exact linear-programming machinery over rationals.
//!
//! Matrix-game values with verifiable certificates, Mills' marginal value,
//! parametric games with basis-stability thresholds, value approximation
//! by bisection on the sign of the one-sided derivative, and the effective
//! reduction of repeated games with absorbing states to generalized Big
//! Match games.

mod kohlberg;
mod matrix_game;
mod mills;
mod parametric;
mod reduce;
mod simplex;
mod value;

pub use kohlberg::{kohlberg_pair, ColumnAggregates, KohlbergPair};
pub use matrix_game::{
    basis_solution, game_value, solve_matrix_game, verify_basis_optimal, verify_solution,
    GameSolution,
};
pub use mills::marginal_value;
pub use parametric::{
    limit_strategy, parametric_basis, stability_threshold_for, ParametricGame, ThresholdMode,
};
pub use reduce::{
    entry_magnitude_bound, parse_reduction, reduce, render_reduction, ReductionOutput,
};
pub use simplex::{ConstraintOp, LinearProgram, LpSolution};
pub use value::{approximate_value, delta, Delta};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("degenerate basis: denominator polynomial is identically zero")]
    DegenerateBasis,
    #[error("no certifying basis found: {0}")]
    BasisNotFound(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("postcondition violated: {0}")]
    PostconditionViolated(String),
}
