//! Exact matrix-game values, optimal strategies and basis certificates.
//!
//! The primal linear program over variables `(x, v)` is
//!
//! ```text
//! max v   s.t.   (A^T x)_j >= v  for every column j,
//!                sum x = 1,  x >= 0.
//! ```
//!
//! A basis is a set of `m + 1` constraint indices (always including the
//! equality) whose tight system pins the solution; by Cramer's rule the
//! solution coordinates are determinant ratios of the basis matrix, which
//! is what the parametric machinery exploits.

use super::{ConstraintOp, LinearProgram};
use crate::games::MatrixGame;
use crate::numeric::{solve_linear, Matrix, Rational};
use num_traits::{One, Signed, Zero};

/// Index scheme for the constraints of the matrix-game LP on an `m x n`
/// game: `0..n` are column constraints, `n..n+m` are `x_i >= 0`, and
/// `n + m` is the simplex equality `sum x = 1`.
pub fn equality_constraint_index(game: &MatrixGame) -> usize {
    game.cols() + game.rows()
}

#[derive(Debug, Clone)]
pub struct GameSolution {
    pub value: Rational,
    pub row_optimal: Vec<Rational>,
    pub col_optimal: Vec<Rational>,
    /// Certifying basis: `m + 1` constraint indices, equality included.
    pub basis: Vec<usize>,
}

/// Solves a matrix game exactly: value, optimal strategies for both
/// players, and a certifying basis. Matrix games are always solvable.
pub fn solve_matrix_game(game: &MatrixGame) -> GameSolution {
    let row_optimal = optimal_row_strategy(game);
    let col_optimal = optimal_row_strategy(&game.neg_transpose());
    let value = game
        .row_mixture_payoffs(&row_optimal)
        .into_iter()
        .min()
        .expect("at least one column");
    let basis = select_basis(game, &row_optimal, &value)
        .expect("an optimal vertex admits a nonsingular tight basis");
    let sol = GameSolution {
        value,
        row_optimal,
        col_optimal,
        basis,
    };
    debug_assert!(verify_solution(game, &sol));
    sol
}

/// Value only.
pub fn game_value(game: &MatrixGame) -> Rational {
    let x = optimal_row_strategy(game);
    game.row_mixture_payoffs(&x)
        .into_iter()
        .min()
        .expect("at least one column")
}

fn optimal_row_strategy(game: &MatrixGame) -> Vec<Rational> {
    let m = game.rows();
    let n = game.cols();
    // variables: x_1..x_m, v
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    let mut lp = LinearProgram::new(objective);
    lp.mark_free(m);
    for j in 0..n {
        let mut row = vec![Rational::zero(); m + 1];
        for i in 0..m {
            row[i] = game.entry(i, j).clone();
        }
        row[m] = -Rational::one();
        lp.add_row(row, ConstraintOp::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); m + 1];
    ones[m] = Rational::zero();
    lp.add_row(ones, ConstraintOp::Eq, Rational::one());

    let sol = lp.solve().expect("matrix-game LP is feasible and bounded");
    sol.primal[..m].to_vec()
}

/// Exact certificate check: both vectors are distributions and
/// `min_j (x^T A)_j = value = max_i (A y)_i`.
pub fn verify_solution(game: &MatrixGame, sol: &GameSolution) -> bool {
    is_distribution(&sol.row_optimal, game.rows())
        && is_distribution(&sol.col_optimal, game.cols())
        && game
            .row_mixture_payoffs(&sol.row_optimal)
            .into_iter()
            .min()
            .as_ref()
            == Some(&sol.value)
        && game
            .col_mixture_payoffs(&sol.col_optimal)
            .into_iter()
            .max()
            .as_ref()
            == Some(&sol.value)
}

fn is_distribution(p: &[Rational], len: usize) -> bool {
    p.len() == len
        && p.iter().all(|v| !v.is_negative())
        && p.iter().sum::<Rational>() == Rational::one()
}

/// The tight-constraint row over `(x, v)` for a constraint index.
fn constraint_row(game: &MatrixGame, c: usize) -> Vec<Rational> {
    let m = game.rows();
    let n = game.cols();
    let mut row = vec![Rational::zero(); m + 1];
    if c < n {
        for i in 0..m {
            row[i] = game.entry(i, c).clone();
        }
        row[m] = -Rational::one();
    } else if c < n + m {
        row[c - n] = Rational::one();
    } else {
        for v in row.iter_mut().take(m) {
            *v = Rational::one();
        }
    }
    row
}

/// The basis matrix `M_B`: selected constraint rows with the equality
/// ordered last.
pub fn basis_matrix(game: &MatrixGame, basis: &[usize]) -> Matrix {
    let eq = equality_constraint_index(game);
    let mut rows: Vec<Vec<Rational>> = basis
        .iter()
        .filter(|&&c| c != eq)
        .map(|&c| constraint_row(game, c))
        .collect();
    rows.push(constraint_row(game, eq));
    Matrix::from_rows(rows)
}

/// The basic solution `(x, v)` determined by a basis, or `None` when the
/// basis matrix is singular.
pub fn basis_solution(game: &MatrixGame, basis: &[usize]) -> Option<(Vec<Rational>, Rational)> {
    let m = game.rows();
    let mat = basis_matrix(game, basis);
    let mut rhs = vec![Rational::zero(); m + 1];
    rhs[m] = Rational::one();
    let z = solve_linear(&mat, &rhs)?;
    let (x, v) = z.split_at(m);
    Some((x.to_vec(), v[0].clone()))
}

/// Selects `m + 1` tight constraints at an optimal `(x, v)` forming a
/// basis that passes the full optimality certificate. Greedy in index
/// order first (equality, then columns, then nonnegativity); at a
/// degenerate vertex the greedy pick may be primal-optimal but dual
/// infeasible, in which case the tight subsets are searched exhaustively
/// (the vertex comes from a terminated simplex run, so a certifying basis
/// exists among them).
fn select_basis(game: &MatrixGame, x: &[Rational], v: &Rational) -> Option<Vec<usize>> {
    let m = game.rows();
    let n = game.cols();
    let payoffs = game.row_mixture_payoffs(x);
    let mut tight: Vec<usize> = Vec::new();
    tight.extend((0..n).filter(|&j| &payoffs[j] == v));
    tight.extend((0..m).filter(|&i| x[i].is_zero()).map(|i| n + i));

    let accept = |chosen: &mut Vec<usize>| -> bool {
        chosen.sort_unstable();
        match basis_solution(game, chosen) {
            Some((bx, bv)) => bx == x && &bv == v && verify_basis_optimal(game, chosen),
            None => false,
        }
    };

    // greedy by rank
    let mut chosen: Vec<usize> = vec![equality_constraint_index(game)];
    let mut rows: Vec<Vec<Rational>> = vec![constraint_row(game, chosen[0])];
    for &c in &tight {
        if chosen.len() == m + 1 {
            break;
        }
        let candidate = constraint_row(game, c);
        if increases_rank(&rows, &candidate) {
            rows.push(candidate);
            chosen.push(c);
        }
    }
    if chosen.len() == m + 1 && accept(&mut chosen) {
        return Some(chosen);
    }

    // exhaustive over tight subsets of size m (plus the equality)
    let mut subset: Vec<usize> = (0..m.min(tight.len())).collect();
    if tight.len() < m {
        return None;
    }
    loop {
        let mut candidate: Vec<usize> = subset.iter().map(|&k| tight[k]).collect();
        candidate.push(equality_constraint_index(game));
        if accept(&mut candidate) {
            return Some(candidate);
        }
        // next combination
        let mut idx = m;
        loop {
            if idx == 0 {
                return None;
            }
            idx -= 1;
            if subset[idx] + (m - idx) <= tight.len() - 1 {
                subset[idx] += 1;
                for later in idx + 1..m {
                    subset[later] = subset[later - 1] + 1;
                }
                break;
            }
        }
    }
}

fn increases_rank(rows: &[Vec<Rational>], candidate: &[Rational]) -> bool {
    // Gaussian elimination of the candidate against the accepted rows.
    let mut work: Vec<Vec<Rational>> = rows.to_vec();
    work.push(candidate.to_vec());
    let n_cols = candidate.len();
    let mut rank = 0usize;
    for col in 0..n_cols {
        let Some(pivot) = (rank..work.len()).find(|&r| !work[r][col].is_zero()) else {
            continue;
        };
        work.swap(rank, pivot);
        let inv = work[rank][col].clone().recip();
        for j in col..n_cols {
            work[rank][j] = &work[rank][j] * &inv;
        }
        for r in 0..work.len() {
            if r != rank && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for j in col..n_cols {
                    let t = &f * &work[rank][j];
                    work[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank == rows.len() + 1
}

/// Exact optimality certificate for a basis at a specific game, without
/// re-solving: the basic solution must be primal feasible, and the
/// complementary dual solution read off the same basis must be a feasible
/// column strategy attaining the same value.
pub fn verify_basis_optimal(game: &MatrixGame, basis: &[usize]) -> bool {
    let m = game.rows();
    let n = game.cols();
    let eq = equality_constraint_index(game);
    if basis.len() != m + 1 || !basis.contains(&eq) {
        return false;
    }
    let Some((x, v)) = basis_solution(game, basis) else {
        return false;
    };
    if x.iter().any(Signed::is_negative) {
        return false;
    }
    let payoffs = game.row_mixture_payoffs(&x);
    if payoffs.iter().any(|p| p < &v) {
        return false;
    }

    // Dual: a column mixture supported on the basis columns that makes
    // every row with x_i > 0 pay exactly w, with w = v.
    let basis_cols: Vec<usize> = basis.iter().copied().filter(|&c| c < n).collect();
    let active_rows: Vec<usize> = (0..m).filter(|&i| !basis.contains(&(n + i))).collect();
    let k = basis_cols.len();
    if active_rows.len() != k {
        return false;
    }
    // unknowns: y over basis_cols, then w
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(k + 1);
    for &i in &active_rows {
        let mut row: Vec<Rational> = basis_cols
            .iter()
            .map(|&j| game.entry(i, j).clone())
            .collect();
        row.push(-Rational::one());
        rows.push(row);
    }
    let mut sum_row = vec![Rational::one(); k];
    sum_row.push(Rational::zero());
    rows.push(sum_row);
    let mut rhs = vec![Rational::zero(); k + 1];
    rhs[k] = Rational::one();
    let Some(sol) = solve_linear(&Matrix::from_rows(rows), &rhs) else {
        return false;
    };
    let (y_part, w) = sol.split_at(k);
    let w = &w[0];
    if w != &v || y_part.iter().any(Signed::is_negative) {
        return false;
    }
    let mut y = vec![Rational::zero(); n];
    for (&j, val) in basis_cols.iter().zip(y_part) {
        y[j] = val.clone();
    }
    let row_payoffs = game.col_mixture_payoffs(&y);
    row_payoffs.iter().all(|p| p <= w)
}
