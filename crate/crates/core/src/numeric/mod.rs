//! Exact scalar and polynomial arithmetic.
//!
//! Everything on the solver path is computed over arbitrary-precision
//! rationals; floating point is confined to test oracles and display.

mod matrix;
mod poly;
mod rational;

pub use matrix::{determinant, solve_linear, Matrix};
pub use poly::{interpolate, root_magnitude_bounds, Polynomial};
pub use rational::{
    bit_size, decimal_string, parse_rational, rat, ratio, ParseRationalError, Rational,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("interpolation points must have pairwise distinct abscissae")]
    DegenerateInterpolation,
    #[error("the zero polynomial has no root bounds")]
    ZeroPolynomial,
    #[error("empty range")]
    EmptyRange,
}
