//! Density of opponent action prefixes.

use super::{GameError, GeneralizedBigMatch, ROW_L};
use crate::numeric::{rat, Rational};

/// Fraction of L actions in a prefix (`true` = L).
pub fn density(prefix: &[bool]) -> Result<Rational, GameError> {
    if prefix.is_empty() {
        return Err(GameError::EmptyRange);
    }
    let l_count = prefix.iter().filter(|&&b| b).count();
    Ok(Rational::new(l_count.into(), prefix.len().into()))
}

/// Density of L over rounds `t_start..=t_end` (1-based, inclusive), with
/// the `t_end - t_start + 1` denominator.
pub fn window_density(word: &[bool], t_start: u64, t_end: u64) -> Result<Rational, GameError> {
    if t_start == 0 || t_start > t_end || t_end as usize > word.len() {
        return Err(GameError::EmptyRange);
    }
    let slice = &word[(t_start - 1) as usize..t_end as usize];
    let l_count = slice.iter().filter(|&&b| b).count();
    Ok(Rational::new(
        l_count.into(),
        (t_end - t_start + 1).into(),
    ))
}

/// Generalized density: average of row-L stage payoffs along a column
/// prefix.
pub fn generalized_density(
    g: &GeneralizedBigMatch,
    prefix: &[usize],
) -> Result<Rational, GameError> {
    if prefix.is_empty() {
        return Err(GameError::EmptyRange);
    }
    let sum: Rational = prefix
        .iter()
        .map(|&j| g.game().payoff(ROW_L, j).clone())
        .sum();
    Ok(sum / rat(prefix.len() as i64))
}
