//! Closed-form tail bounds for test assertions.
//!
//! The exponential forms are irrational; each helper returns a rational
//! upper bound on the displayed expression (directed rounding), so using
//! the returned value as a bound in an assertion stays sound.

use super::SimError;
use crate::numeric::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A rational upper bound on `exp(-x)` for `x >= 0`, within `2^-precision`
/// of the true value.
pub fn exp_neg_upper(x: &Rational, precision: u64) -> Rational {
    assert!(!x.is_negative(), "exp_neg_upper needs x >= 0");
    if x.is_zero() {
        return Rational::one();
    }
    // lower-bound e^x by its Taylor prefix; add terms until the remainder
    // is provably below the target relative error
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k = BigInt::one();
    let threshold = Rational::new(BigInt::one(), BigInt::one() << (precision + 2));
    loop {
        term = term * x / Rational::from_integer(k.clone());
        sum += &term;
        k += 1;
        // once k > 2x the remainder is below 2 * term
        let k_rat = Rational::from_integer(k.clone());
        if &k_rat > &(x * Rational::from_integer(2.into())) && &term < &threshold {
            break;
        }
    }
    // e^-x <= 1/sum; truncate the representation upward
    let inv = sum.recip();
    let scale = Rational::from_integer(BigInt::one() << precision);
    (inv * &scale).ceil() / scale
}

/// Multiplicative Chernoff upper tail: `P[X >= (1+eps) E[X]]` is at most
/// `exp(-eps^2/(2+eps) * E[X])`; requires `eps > 0`, `mean >= 0`.
pub fn chernoff_upper(eps: &Rational, mean: &Rational) -> Result<Rational, SimError> {
    if !eps.is_positive() || mean.is_negative() {
        return Err(SimError::InvalidParameter(
            "chernoff_upper needs eps > 0 and mean >= 0".into(),
        ));
    }
    let exponent = eps * eps / (Rational::from_integer(2.into()) + eps) * mean;
    Ok(exp_neg_upper(&exponent, 64))
}

/// Multiplicative Chernoff lower tail: `P[X <= (1-eps) E[X]]` is at most
/// `exp(-eps^2/2 * E[X])`; requires `eps in (0, 1]`, `mean >= 0`.
pub fn chernoff_lower(eps: &Rational, mean: &Rational) -> Result<Rational, SimError> {
    if !eps.is_positive() || eps > &Rational::one() || mean.is_negative() {
        return Err(SimError::InvalidParameter(
            "chernoff_lower needs eps in (0,1] and mean >= 0".into(),
        ));
    }
    let exponent = eps * eps / Rational::from_integer(2.into()) * mean;
    Ok(exp_neg_upper(&exponent, 64))
}

/// Hoeffding for sampling without replacement:
/// `P[|X - E[X]| >= t] <= 2 exp(-2 t^2 / sum (b_i - a_i)^2)`.
pub fn hoeffding(range_widths: &[Rational], t: &Rational) -> Result<Rational, SimError> {
    if range_widths.is_empty() || t.is_negative() {
        return Err(SimError::InvalidParameter(
            "hoeffding needs ranges and t >= 0".into(),
        ));
    }
    let sum_sq: Rational = range_widths.iter().map(|w| w * w).sum();
    if !sum_sq.is_positive() {
        return Err(SimError::InvalidParameter(
            "hoeffding needs a positive squared-range sum".into(),
        ));
    }
    let exponent = Rational::from_integer(2.into()) * t * t / sum_sq;
    Ok(Rational::from_integer(2.into()) * exp_neg_upper(&exponent, 64))
}
