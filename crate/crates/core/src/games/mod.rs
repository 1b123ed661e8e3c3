//! Game representations and play semantics.
//!
//! A repeated game with absorbing states is kept in matrix form: stage
//! payoffs and per-entry stop probabilities. Generalized Big Match games
//! are the two-row subclass where the top row never stops and the bottom
//! row stops with positive probability in every column.

mod absorbing;
mod density;
mod matrix_game;
mod parse;
mod transcript;

pub use absorbing::{
    auxiliary_game, auxiliary_split, derived_game, two_row_solve, AbsorbingGame,
    GeneralizedBigMatch, TwoRowSolution, COL_L, COL_R, ROW_L, ROW_R,
};
pub use density::{density, generalized_density, window_density};
pub use matrix_game::MatrixGame;
pub use parse::{parse_game, render_game, ParseError};
pub use transcript::{
    dyadic_checkpoints, finite_payoff, liminf_proxy, limsup_proxy, SamplePoint, Transcript,
    CHECKPOINT_FLOOR,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("empty range")]
    EmptyRange,
    #[error("stop probability outside [0,1] at entry ({row},{col})")]
    StopProbabilityRange { row: usize, col: usize },
    #[error("not a generalized Big Match game: {0}")]
    NotGeneralizedBigMatch(String),
    #[error("derived-game assumption violated: {0}")]
    AssumptionViolated(String),
}
