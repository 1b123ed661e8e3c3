//! Two-phase primal simplex over exact rationals.
//!
//! Bland's anti-cycling rule with lowest-index tie-breaking throughout, so
//! every solve terminates and produces the same basis on the same input.
//! Problem sizes in this crate are small (tens of variables), so a dense
//! tableau is fine.

use super::SolverError;
use crate::numeric::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintOp {
    Le,
    Eq,
    Ge,
}

/// A general-form linear program: `max c.z` subject to row constraints,
/// with each variable either nonnegative or free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, ConstraintOp, Rational)>,
    /// `true` marks a free variable; `false` means `>= 0`.
    pub free: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective_value: Rational,
    pub primal: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn mark_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, op: ConstraintOp, rhs: Rational) {
        assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push((coeffs, op, rhs));
    }

    /// Solves by two-phase simplex.
    pub fn solve(&self) -> Result<LpSolution, SolverError> {
        // Map to standard form: split free variables, add slack/surplus,
        // normalize to nonnegative right-hand sides.
        let n_orig = self.objective.len();
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n_orig);
        let mut n_std = 0usize;
        for &f in &self.free {
            if f {
                col_of.push((n_std, Some(n_std + 1)));
                n_std += 2;
            } else {
                col_of.push((n_std, None));
                n_std += 1;
            }
        }
        let n_slack = self
            .rows
            .iter()
            .filter(|(_, op, _)| *op != ConstraintOp::Eq)
            .count();
        let m = self.rows.len();
        let total = n_std + n_slack;

        let mut tableau: Vec<Vec<Rational>> = vec![vec![Rational::zero(); total]; m];
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut slack_idx = n_std;
        for (r, (coeffs, op, b)) in self.rows.iter().enumerate() {
            let flip = b.is_negative();
            let sign = if flip { -Rational::one() } else { Rational::one() };
            for (v, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (pos, neg) = col_of[v];
                tableau[r][pos] = &sign * c;
                if let Some(neg) = neg {
                    tableau[r][neg] = -&tableau[r][pos];
                }
            }
            match op {
                ConstraintOp::Eq => {}
                ConstraintOp::Le => {
                    tableau[r][slack_idx] = sign.clone();
                    slack_idx += 1;
                }
                ConstraintOp::Ge => {
                    tableau[r][slack_idx] = -sign.clone();
                    slack_idx += 1;
                }
            }
            rhs.push(if flip { -b } else { b.clone() });
        }

        let mut objective = vec![Rational::zero(); total];
        for (v, c) in self.objective.iter().enumerate() {
            let (pos, neg) = col_of[v];
            objective[pos] = c.clone();
            if let Some(neg) = neg {
                objective[neg] = -c;
            }
        }

        let z = solve_standard(tableau, rhs, &objective)?;
        let primal: Vec<Rational> = (0..n_orig)
            .map(|v| {
                let (pos, neg) = col_of[v];
                match neg {
                    Some(neg) => &z[pos] - &z[neg],
                    None => z[pos].clone(),
                }
            })
            .collect();
        let objective_value = self
            .objective
            .iter()
            .zip(&primal)
            .map(|(c, x)| c * x)
            .sum();
        Ok(LpSolution {
            objective_value,
            primal,
        })
    }
}

/// `max obj.z` s.t. `tableau z = rhs`, `z >= 0`, `rhs >= 0`.
fn solve_standard(
    mut tableau: Vec<Vec<Rational>>,
    mut rhs: Vec<Rational>,
    objective: &[Rational],
) -> Result<Vec<Rational>, SolverError> {
    let m = tableau.len();
    let n = objective.len();

    // Phase 1: append artificials, drive their sum to zero.
    for (r, row) in tableau.iter_mut().enumerate() {
        row.extend((0..m).map(|k| {
            if k == r {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut phase1 = vec![Rational::zero(); n + m];
    for c in phase1.iter_mut().skip(n) {
        *c = -Rational::one();
    }
    iterate(&mut tableau, &mut rhs, &mut basis, &phase1, n + m)?;
    let infeas: Rational = basis
        .iter()
        .zip(&rhs)
        .filter(|(&b, _)| b >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if !infeas.is_zero() {
        return Err(SolverError::Infeasible);
    }
    // Pivot lingering artificials out where possible; rows without any
    // original coefficient are redundant and stay parked at zero.
    for r in 0..m {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tableau[r][j].is_zero()) {
                pivot(&mut tableau, &mut rhs, &mut basis, r, j);
            }
        }
    }

    // Phase 2 over the original objective; artificials may not re-enter.
    let mut phase2 = objective.to_vec();
    phase2.extend(std::iter::repeat_with(Rational::zero).take(m));
    iterate(&mut tableau, &mut rhs, &mut basis, &phase2, n)?;

    let mut z = vec![Rational::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            z[b] = rhs[r].clone();
        }
    }
    Ok(z)
}

fn iterate(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    cost: &[Rational],
    enter_limit: usize,
) -> Result<(), SolverError> {
    loop {
        let entering = match entering_column(tableau, basis, cost, enter_limit) {
            Some(j) => j,
            None => return Ok(()),
        };
        let leaving = match leaving_row(tableau, rhs, basis, entering) {
            Some(r) => r,
            None => return Err(SolverError::Unbounded),
        };
        pivot(tableau, rhs, basis, leaving, entering);
    }
}

/// Bland: lowest-index nonbasic column with positive reduced cost.
fn entering_column(
    tableau: &[Vec<Rational>],
    basis: &[usize],
    cost: &[Rational],
    enter_limit: usize,
) -> Option<usize> {
    for j in 0..enter_limit {
        if basis.contains(&j) {
            continue;
        }
        let mut reduced = cost[j].clone();
        for (r, &b) in basis.iter().enumerate() {
            if !cost[b].is_zero() && !tableau[r][j].is_zero() {
                reduced -= &cost[b] * &tableau[r][j];
            }
        }
        if reduced.is_positive() {
            return Some(j);
        }
    }
    None
}

/// Minimum-ratio row; ties broken by the smallest basic-variable index.
fn leaving_row(
    tableau: &[Vec<Rational>],
    rhs: &[Rational],
    basis: &[usize],
    entering: usize,
) -> Option<usize> {
    let mut best: Option<(Rational, usize, usize)> = None;
    for (r, row) in tableau.iter().enumerate() {
        if !row[entering].is_positive() {
            continue;
        }
        let ratio = &rhs[r] / &row[entering];
        let key = (ratio, basis[r], r);
        best = match best {
            None => Some(key),
            Some(cur) => {
                if (key.0 < cur.0) || (key.0 == cur.0 && key.1 < cur.1) {
                    Some(key)
                } else {
                    Some(cur)
                }
            }
        };
    }
    best.map(|(_, _, r)| r)
}

fn pivot(
    tableau: &mut [Vec<Rational>],
    rhs: &mut [Rational],
    basis: &mut [usize],
    row: usize,
    col: usize,
) {
    let inv = tableau[row][col].clone().recip();
    for v in tableau[row].iter_mut() {
        if !v.is_zero() {
            *v = &*v * &inv;
        }
    }
    rhs[row] = &rhs[row] * &inv;
    for r in 0..tableau.len() {
        if r == row || tableau[r][col].is_zero() {
            continue;
        }
        let factor = tableau[r][col].clone();
        let (pivot_row, other_row) = if r < row {
            let (a, b) = tableau.split_at_mut(row);
            (&b[0], &mut a[r])
        } else {
            let (a, b) = tableau.split_at_mut(r);
            (&a[row], &mut b[0])
        };
        for (v, p) in other_row.iter_mut().zip(pivot_row.iter()) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
        let t = &factor * &rhs[row];
        rhs[r] -= t;
    }
    basis[row] = col;
}
