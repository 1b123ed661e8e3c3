//! Dense rational matrices and exact determinants.

use super::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data size mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Matrix {
        Matrix::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled to integers (tracking the scale product), then the
/// integer matrix goes through fraction-free Bareiss elimination. Cofactor
/// expansion exists only as a test oracle.
pub fn determinant(m: &Matrix) -> Rational {
    assert_eq!(m.rows(), m.cols(), "determinant requires a square matrix");
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for v in m.row(i) {
            lcm = lcm.lcm(v.denom());
        }
        a.push(
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
        scale *= lcm;
    }

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_exact(&prev);
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Rational::new(sign * a[n - 1][n - 1].clone(), scale)
}

/// Exact solution of the square system `m z = rhs`; `None` when `m` is
/// singular.
pub fn solve_linear(m: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows(), m.cols(), "solve_linear requires a square matrix");
    assert_eq!(m.rows(), rhs.len());
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut b: Vec<Rational> = rhs.to_vec();

    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        let inv = a[k][k].clone().recip();
        for j in k..n {
            a[k][j] = &a[k][j] * &inv;
        }
        b[k] = &b[k] * &inv;
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut a[i][k], Rational::zero());
            for j in k + 1..n {
                let t = &factor * &a[k][j];
                a[i][j] -= t;
            }
            let t = &factor * &b[k];
            b[i] -= t;
        }
    }
    Some(b)
}

trait DivExact {
    fn div_exact(&self, d: &BigInt) -> BigInt;
}

impl DivExact for BigInt {
    fn div_exact(&self, d: &BigInt) -> BigInt {
        debug_assert!((self % d).is_zero());
        self / d
    }
}

#[cfg(test)]
pub(crate) fn determinant_cofactor(m: &Matrix) -> Rational {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut det = Rational::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let minor_rows: Vec<Vec<Rational>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[(i, c)].clone())
                    .collect()
            })
            .collect();
        let minor = determinant_cofactor(&Matrix::from_rows(minor_rows));
        let term = &m[(0, j)] * &minor;
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};
    use crate::sim::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, n: usize) -> Matrix {
        let data = (0..n * n)
            .map(|_| {
                let num = (rng.next_u64() % 41) as i64 - 20;
                let den = (rng.next_u64() % 9) as i64 + 1;
                ratio(num, den)
            })
            .collect();
        Matrix::new(n, n, data)
    }

    #[test]
    fn identity_determinant() {
        assert_eq!(determinant(&Matrix::identity(3)), rat(1));
    }

    #[test]
    fn hand_expansion_2x2() {
        let m = Matrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]]);
        assert_eq!(determinant(&m), rat(-2));
    }

    #[test]
    fn matches_cofactor_oracle_on_random_5x5() {
        let mut rng = SplitMix64::new(0xD5EA11);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 5);
            assert_eq!(determinant(&m), determinant_cofactor(&m));
        }
    }

    #[test]
    fn multiplicative_on_random_3x3() {
        let mut rng = SplitMix64::new(0xCAFE);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3);
            let b = random_matrix(&mut rng, 3);
            assert_eq!(determinant(&a.matmul(&b)), determinant(&a) * determinant(&b));
        }
    }

    #[test]
    fn alternating_in_rows() {
        let mut rng = SplitMix64::new(7);
        let m = random_matrix(&mut rng, 4);
        let mut rows: Vec<Vec<Rational>> = (0..4).map(|i| m.row(i).to_vec()).collect();
        rows.swap(1, 3);
        let swapped = Matrix::from_rows(rows);
        assert_eq!(determinant(&swapped), -determinant(&m));
    }

    #[test]
    fn singular_matrix() {
        let m = Matrix::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(5)],
        ]);
        assert_eq!(determinant(&m), rat(0));
    }
}
