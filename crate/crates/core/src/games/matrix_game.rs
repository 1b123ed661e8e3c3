//! One-shot zero-sum matrix games.

use crate::numeric::{Matrix, Rational};

/// An `m x n` matrix game; rows belong to the maximizer (Player 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGame {
    entries: Matrix,
}

impl MatrixGame {
    pub fn new(entries: Matrix) -> Self {
        assert!(
            entries.rows() >= 1 && entries.cols() >= 1,
            "matrix games need at least one row and one column"
        );
        MatrixGame { entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        MatrixGame::new(Matrix::from_rows(rows))
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// The game seen by the column player as a maximizer: `-A^T`.
    pub fn neg_transpose(&self) -> MatrixGame {
        MatrixGame::new(self.entries.transpose().map(|v| -v))
    }

    /// Expected payoff `x^T A y` for mixed strategies `x`, `y`.
    pub fn expected_payoff(&self, x: &[Rational], y: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.rows());
        assert_eq!(y.len(), self.cols());
        let mut acc = Rational::new(0.into(), 1.into());
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc += xi * self.entry(i, j) * yj;
            }
        }
        acc
    }

    /// Column-wise payoffs `(x^T A)_j` of a fixed row mixture.
    pub fn row_mixture_payoffs(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.rows());
        (0..self.cols())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .map(|(i, xi)| xi * self.entry(i, j))
                    .sum()
            })
            .collect()
    }

    /// Row-wise payoffs `(A y)_i` of a fixed column mixture.
    pub fn col_mixture_payoffs(&self, y: &[Rational]) -> Vec<Rational> {
        assert_eq!(y.len(), self.cols());
        (0..self.rows())
            .map(|i| {
                y.iter()
                    .enumerate()
                    .map(|(j, yj)| yj * self.entry(i, j))
                    .sum()
            })
            .collect()
    }
}
