//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first; the zero polynomial is the
//! empty coefficient vector. Degrees stay small here (parametric-game
//! numerators and denominators), so dense storage and Lagrange
//! interpolation are exact and cheap.

use super::{NumericError, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(degree, coefficient)` of the lowest-degree nonzero term.
    pub fn lowest_nonzero(&self) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Integer coefficients after clearing denominators, together with the
    /// common denominator used. Roots are unchanged by the scaling.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        (ints, lcm)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

/// Unique polynomial of degree at most `degree_bound` through the given
/// points, by exact Lagrange interpolation.
///
/// Requires `points.len() == degree_bound + 1` with pairwise distinct
/// abscissae.
pub fn interpolate(
    points: &[(Rational, Rational)],
    degree_bound: usize,
) -> Result<Polynomial, NumericError> {
    if points.len() != degree_bound + 1 {
        return Err(NumericError::DegenerateInterpolation);
    }
    for (a, (xa, _)) in points.iter().enumerate() {
        for (xb, _) in &points[a + 1..] {
            if xa == xb {
                return Err(NumericError::DegenerateInterpolation);
            }
        }
    }
    let mut result = Polynomial::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        let mut basis = Polynomial::constant(Rational::one());
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &Polynomial::new(vec![-xj.clone(), Rational::one()]);
            denom *= xi - xj;
        }
        let scale = Polynomial::constant(yi / denom);
        result = &result + &(&basis * &scale);
    }
    Ok(result)
}

/// Magnitude bounds for the nonzero real roots of a nonzero polynomial:
/// every nonzero root `g` satisfies `lower < |g| < upper` where
/// `upper = 2*max|coeff|` over the integer form and `lower = 1/upper`.
///
/// Rational coefficients are cleared to integers first; scaling preserves
/// the roots.
pub fn root_magnitude_bounds(f: &Polynomial) -> Result<(Rational, Rational), NumericError> {
    if f.is_zero() {
        return Err(NumericError::ZeroPolynomial);
    }
    let (ints, _) = f.clear_denominators();
    let norm = ints
        .iter()
        .map(Signed::abs)
        .max()
        .expect("nonzero polynomial");
    let upper = Rational::from_integer(2 * norm);
    let lower = upper.recip();
    Ok((lower, upper))
}
