//! Value approximation for repeated games with absorbing states.
//!
//! The sign of the one-sided derivative `Delta_A(u)` of `val(A(u,t))` at
//! `t = 0+` (relative to `u`) characterizes the game value: below the
//! value it is positive, above it negative. Bisection on that sign pins
//! the value to any accuracy.

use super::{game_value, marginal_value};
use crate::games::{auxiliary_game, auxiliary_split, AbsorbingGame};
use crate::numeric::{rat, Rational};
use num_traits::Signed;
use std::cmp::Ordering;

/// The extended-real derivative sign holder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Delta {
    NegInfinite,
    Finite(Rational),
    PosInfinite,
}

impl Delta {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Delta::NegInfinite => false,
            Delta::Finite(v) => !v.is_negative(),
            Delta::PosInfinite => true,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Delta::NegInfinite => false,
            Delta::Finite(v) => v.is_positive(),
            Delta::PosInfinite => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        !self.is_nonnegative()
    }
}

/// `Delta_A(u)`: `+inf` when `val(A(u,0)) > u`, `-inf` when `< u`, and the
/// marginal value of the `u`-split otherwise.
pub fn delta(g: &AbsorbingGame, u: &Rational) -> Delta {
    let at_zero = game_value(&auxiliary_game(g, u, &rat(0)));
    match at_zero.cmp(u) {
        Ordering::Greater => Delta::PosInfinite,
        Ordering::Less => Delta::NegInfinite,
        Ordering::Equal => {
            let (a1, a2) = auxiliary_split(g, u);
            Delta::Finite(marginal_value(&a1, &a2))
        }
    }
}

/// Approximates the value of a repeated game with absorbing states within
/// an additive error `eps`, by bisection over `[min payoff, max payoff]`.
///
/// A probe with `Delta = 0` does not short-circuit; the loop narrows on
/// interval width alone (a zero derivative is only possible at the value
/// itself, so treating it as "go right" keeps the invariant).
pub fn approximate_value(g: &AbsorbingGame, eps: &Rational) -> Rational {
    assert!(eps.is_positive(), "tolerance must be positive");
    let mut lo = g.min_payoff();
    let mut hi = g.max_payoff();
    let two = rat(2);
    let width_target = eps * &two;
    while &hi - &lo > width_target {
        let mid = (&lo + &hi) / &two;
        if delta(g, &mid).is_nonnegative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (&lo + &hi) / &two
}
