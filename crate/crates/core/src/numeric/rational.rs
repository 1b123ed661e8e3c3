//! The rational scalar type and its canonical text syntax.
//!
//! Every probability, payoff and LP quantity in this crate is a
//! [`Rational`]. Canonical form (positive denominator, reduced fraction) is
//! maintained by construction. The text syntax is `p`, `-p` or `p/q` with
//! `q > 0` and no whitespace inside a token; `Display` renders exactly this
//! syntax back.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational token `{token}`: {reason}")]
pub struct ParseRationalError {
    pub token: String,
    pub reason: &'static str,
}

fn err(token: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        token: token.to_owned(),
        reason,
    }
}

/// Parses the canonical syntax `int ('/' posint)?`.
///
/// Unlike `BigRational::from_str`, a zero or negative denominator is
/// rejected rather than normalized away.
pub fn parse_rational(token: &str) -> Result<Rational, ParseRationalError> {
    if token.is_empty() {
        return Err(err(token, "empty token"));
    }
    let (num_str, den_str) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let numer = parse_int(num_str, true).ok_or_else(|| err(token, "malformed numerator"))?;
    let denom = match den_str {
        None => BigInt::one(),
        Some(d) => {
            let d = parse_int(d, false).ok_or_else(|| err(token, "malformed denominator"))?;
            if d.is_zero() {
                return Err(err(token, "denominator must be positive"));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mag: BigUint = digits.parse().ok()?;
    let mut n = BigInt::from(mag);
    if s.starts_with('-') {
        n = -n;
    }
    Some(n)
}

/// Bit-size of an integer: smallest `t >= 1` with `|n| < 2^t`.
pub fn bit_size(n: &BigInt) -> u64 {
    let bits = n.magnitude().bits();
    bits.max(1)
}

/// Rounded decimal rendering with `digits` fractional digits.
pub fn decimal_string(r: &Rational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u8).pow(digits as u32);
    // round half away from zero
    let scaled = (abs * Rational::from_integer(scale.clone())
        + Rational::new(BigInt::one(), BigInt::from(2)))
    .floor()
    .to_integer();
    let (ipart, fpart) = (scaled.clone() / &scale, scaled % &scale);
    if digits == 0 {
        return format!("{sign}{ipart}");
    }
    format!("{sign}{ipart}.{fpart:0width$}", width = digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_tokens() {
        assert_eq!(parse_rational("5/3").unwrap(), ratio(5, 3));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("0").unwrap(), rat(0));
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
    }

    #[test]
    fn rejects_malformed_tokens() {
        for bad in ["", "1/-2", "1/0", "--3", "1 /2", "a", "1/", "/2", "+3", "1.5"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["5/3", "-5/3", "0", "17", "-1/1048576"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(r.to_string(), s);
            assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn field_identities() {
        let a = ratio(-3, 7);
        let b = ratio(22, 5);
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(&a + &b, &b + &a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn bit_sizes() {
        assert_eq!(bit_size(&BigInt::from(0)), 1);
        assert_eq!(bit_size(&BigInt::from(1)), 1);
        assert_eq!(bit_size(&BigInt::from(-2)), 2);
        assert_eq!(bit_size(&BigInt::from(255)), 8);
        assert_eq!(bit_size(&BigInt::from(256)), 9);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&ratio(1, 2), 3), "0.500");
        assert_eq!(decimal_string(&ratio(-1, 3), 4), "-0.3333");
        assert_eq!(decimal_string(&ratio(2, 3), 2), "0.67");
    }
}
