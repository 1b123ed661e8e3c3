//! Marginal value of a matrix game with respect to a perturbation.
//!
//! `dval(A)/dB = max_{x in O1(A)} min_{y in O2(A)} x^T B y`, computed as a
//! single linear program: the inner minimization is dualized (variables
//! `p, q, r, s`), and membership of `x` in the optimal set of `A` is
//! expressed by the auxiliary block `(x, y', v)`, whose feasibility forces
//! `v = val(A)`, `x` row-optimal and `y'` column-optimal.

use super::{ConstraintOp, LinearProgram};
use crate::games::MatrixGame;
use crate::numeric::Rational;
use num_traits::{One, Zero};

/// One-sided derivative of `val(A + alpha B)` at `alpha = 0+`.
pub fn marginal_value(a: &MatrixGame, b: &MatrixGame) -> Rational {
    assert_eq!(a.rows(), b.rows(), "A and B must have the same shape");
    assert_eq!(a.cols(), b.cols(), "A and B must have the same shape");
    let m = a.rows();
    let n = a.cols();

    // variable layout: p (n) | q (m) | r | s | x (m) | y' (n) | v
    let np = 0;
    let nq = n;
    let nr = n + m;
    let ns = nr + 1;
    let nx = ns + 1;
    let ny = nx + m;
    let nv = ny + n;
    let total = nv + 1;

    let mut objective = vec![Rational::zero(); total];
    objective[nr] = Rational::one();
    objective[ns] = Rational::one();
    let mut lp = LinearProgram::new(objective);
    lp.mark_free(nr);
    lp.mark_free(ns);
    lp.mark_free(nv);

    // (A p)_i + r <= 0
    for i in 0..m {
        let mut row = vec![Rational::zero(); total];
        for j in 0..n {
            row[np + j] = a.entry(i, j).clone();
        }
        row[nr] = Rational::one();
        lp.add_row(row, ConstraintOp::Le, Rational::zero());
    }
    // s - (A^T q)_j - (B^T x)_j <= 0
    for j in 0..n {
        let mut row = vec![Rational::zero(); total];
        row[ns] = Rational::one();
        for i in 0..m {
            row[nq + i] = -a.entry(i, j);
            row[nx + i] = -b.entry(i, j);
        }
        lp.add_row(row, ConstraintOp::Le, Rational::zero());
    }
    // sum q - sum p = 0
    {
        let mut row = vec![Rational::zero(); total];
        for j in 0..n {
            row[np + j] = -Rational::one();
        }
        for i in 0..m {
            row[nq + i] = Rational::one();
        }
        lp.add_row(row, ConstraintOp::Eq, Rational::zero());
    }
    // v - (A^T x)_j <= 0
    for j in 0..n {
        let mut row = vec![Rational::zero(); total];
        row[nv] = Rational::one();
        for i in 0..m {
            row[nx + i] = -a.entry(i, j);
        }
        lp.add_row(row, ConstraintOp::Le, Rational::zero());
    }
    // (A y')_i - v <= 0
    for i in 0..m {
        let mut row = vec![Rational::zero(); total];
        for j in 0..n {
            row[ny + j] = a.entry(i, j).clone();
        }
        row[nv] = -Rational::one();
        lp.add_row(row, ConstraintOp::Le, Rational::zero());
    }
    // sum x = 1, sum y' = 1
    {
        let mut row = vec![Rational::zero(); total];
        for i in 0..m {
            row[nx + i] = Rational::one();
        }
        lp.add_row(row, ConstraintOp::Eq, Rational::one());
        let mut row = vec![Rational::zero(); total];
        for j in 0..n {
            row[ny + j] = Rational::one();
        }
        lp.add_row(row, ConstraintOp::Eq, Rational::one());
    }

    lp.solve()
        .expect("marginal-value LP is feasible and bounded")
        .objective_value
}
