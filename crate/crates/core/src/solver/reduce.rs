//! Reduction of a repeated game with absorbing states to a generalized
//! Big Match game.
//!
//! Pipeline: approximate the value from below, translate and round the
//! payoffs, pick the slope floor `delta` and `eta = delta/4`, compute the
//! optimal pair `x`, `x(t2)`, restrict Player 1 to those two mixtures
//! (the two-row game `C`), keep the columns where only `x(t2)` absorbs,
//! shift by the restricted derived value and scale to integer derived
//! entries. The result either satisfies the generalized Big Match
//! assumption or admits a pure optimal row, and a strategy for it lifts
//! back to the original game by filtering updates to the kept columns.

use super::kohlberg::kohlberg_pair;
use super::parametric::scaled_bitsize;
use super::value::{approximate_value, delta};
use super::{game_value, SolverError, ThresholdMode};
use crate::games::{
    auxiliary_split, derived_game, parse_game, render_game, two_row_solve, AbsorbingGame,
    GeneralizedBigMatch,
};
use crate::numeric::{parse_rational, rat, ratio, Matrix, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    /// `eps = 2^-eps_exponent`.
    pub eps_exponent: u32,
    /// Value approximation with `u + eps/2 <= val < u + 3eps/4`.
    pub u: Rational,
    /// Limit-optimal mixture over the original rows.
    pub x: Vec<Rational>,
    /// Optimal mixture at the parametric point `t2`.
    pub x_t2: Vec<Rational>,
    pub t2: Rational,
    /// Columns kept by the reduction (ascending original indices).
    pub columns_j: Vec<usize>,
    /// Two-row restriction of the original game to `{x, x(t2)}`.
    pub c_game: AbsorbingGame,
    /// `C` restricted to the kept columns and shifted by `v`.
    pub c_prime: Option<AbsorbingGame>,
    /// Value of the derived game of `C` restricted to the kept columns.
    pub v: Rational,
    /// Least common multiple of the shifted derived-entry denominators.
    pub scale: BigInt,
    /// The generalized Big Match game (absent when no column is kept).
    pub d_game: Option<GeneralizedBigMatch>,
    /// Maximum derived-entry magnitude of `d_game`.
    pub k_bound: BigInt,
    /// Pure optimal row of the derived game, when one exists.
    pub pure_row: Option<usize>,
}

/// Worst-case bound on the derived-entry magnitudes of the reduced game.
pub fn entry_magnitude_bound(m: usize, n: usize, eps_exponent: u32, tau1: u64) -> BigInt {
    let base = BigInt::from(24u8)
        * BigInt::from(m as u64 + 2)
        * (BigInt::one() << (u64::from(eps_exponent) + tau1 + 1));
    let exp = 20 * (m as u32 + 2).pow(2) * (2 * n as u32 + 1);
    base.pow(exp)
}

fn stop_probability_bitsize(g: &AbsorbingGame) -> u64 {
    let mut beta1 = BigInt::one();
    for w in g.stop_matrix().iter() {
        beta1 = beta1.lcm(w.denom());
    }
    let mut tau1 = crate::numeric::bit_size(&beta1);
    for w in g.stop_matrix().iter() {
        let scaled = w.numer() * (&beta1 / w.denom());
        tau1 = tau1.max(crate::numeric::bit_size(&scaled));
    }
    tau1
}

/// Reduces `g` (payoffs in `[-1, 1]`) for `eps = 2^-eps_exponent`.
pub fn reduce(
    g: &AbsorbingGame,
    eps_exponent: u32,
    mode: ThresholdMode,
) -> Result<ReductionOutput, SolverError> {
    let one = Rational::one();
    if g.payoff_matrix().iter().any(|b| b.abs() > one) {
        return Err(SolverError::InvalidInput(
            "stage payoffs must satisfy |b| <= 1".into(),
        ));
    }
    let m = g.rows();
    let n = g.cols();
    let eps = Rational::new(BigInt::one(), BigInt::one() << eps_exponent);

    // Value approximation from below: two-sided estimate shifted down.
    let w = approximate_value(g, &(&eps / rat(16)));
    let u = &w - &eps * ratio(5, 8);
    if !delta(g, &(&u + &eps / rat(2))).is_positive() {
        return Err(SolverError::PostconditionViolated(
            "u + eps/2 is not strictly below the value".into(),
        ));
    }
    if !delta(g, &(&u + &eps * ratio(3, 4))).is_negative() {
        return Err(SolverError::PostconditionViolated(
            "u + 3eps/4 is not strictly above the value".into(),
        ));
    }

    // Translate and round payoffs to multiples of eps/4.
    let quantum = &eps / rat(4);
    let rounded = g.payoff_matrix().map(|b| {
        let steps = ((b - &u) / &quantum).floor();
        steps * &quantum
    });
    let translated = AbsorbingGame::new(rounded, g.stop_matrix().clone())
        .expect("stop probabilities unchanged");

    // Slope floor.
    let (a0, a1) = auxiliary_split(&translated, &Rational::zero());
    let val0 = game_value(&a0);
    if val0.is_negative() {
        return Err(SolverError::PostconditionViolated(
            "val(A'(0,0)) must be nonnegative".into(),
        ));
    }
    let (_, tau) = scaled_bitsize(&a0, &a1);
    let base = BigInt::from(m as u64 + 1) * (BigInt::one() << (tau + 1));
    let delta_formula = Rational::new(BigInt::one(), base.pow(2 * m as u32 + 3));
    let slope = if val0.is_positive() {
        std::cmp::min(val0, delta_formula)
    } else {
        delta_formula
    };
    // eta = slope/4 rounded down to a unit fraction
    let k = (rat(4) / &slope).ceil().to_integer();
    let eta = Rational::new(BigInt::one(), k);

    let pair = kohlberg_pair(&translated, &eta, mode)?;
    let t1 = Rational::new(BigInt::one(), BigInt::from(4u8) * base.pow(3 * m as u32 + 4));
    if pair.t2 > t1 {
        return Err(SolverError::PostconditionViolated(
            "t2 exceeds the slope interval bound t1".into(),
        ));
    }

    // Two-row restriction C.
    let mut payoff_rows = vec![Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut stop_rows = vec![Vec::with_capacity(n), Vec::with_capacity(n)];
    for (row, agg) in [(0, &pair.at_limit), (1, &pair.at_t2)] {
        for j in 0..n {
            if agg.stop[j].is_positive() {
                payoff_rows[row].push(agg.absorbed[j].clone());
                stop_rows[row].push(agg.stop[j].clone());
            } else {
                payoff_rows[row].push(agg.continued[j].clone());
                stop_rows[row].push(Rational::zero());
            }
        }
    }
    let c_game = AbsorbingGame::new(
        Matrix::from_rows(payoff_rows),
        Matrix::from_rows(stop_rows),
    )
    .expect("aggregated stop probabilities lie in [0,1]");

    let columns_j: Vec<usize> = (0..n)
        .filter(|&j| pair.at_limit.stop[j].is_zero() && pair.at_t2.stop[j].is_positive())
        .collect();

    if columns_j.is_empty() {
        return Ok(ReductionOutput {
            eps_exponent,
            u,
            x: pair.x,
            x_t2: pair.x_t2,
            t2: pair.t2,
            columns_j,
            c_game,
            c_prime: None,
            v: Rational::zero(),
            scale: BigInt::one(),
            d_game: None,
            k_bound: BigInt::zero(),
            pure_row: None,
        });
    }

    // Value of the derived game of C restricted to the kept columns.
    let c_restricted = restrict_columns(&c_game, &columns_j);
    let c_restricted_derived = derived_game(&c_restricted);
    let v = game_value(&c_restricted_derived);
    if v.is_negative() {
        return Err(SolverError::PostconditionViolated(
            "restricted derived value must be nonnegative".into(),
        ));
    }

    // Shift by v and scale the derived entries to integers.
    let mut cp_payoff = vec![Vec::new(), Vec::new()];
    let mut cp_stop = vec![Vec::new(), Vec::new()];
    for &j in &columns_j {
        cp_payoff[0].push(&pair.at_limit.continued[j] - &v);
        cp_stop[0].push(Rational::zero());
        cp_payoff[1].push(&pair.at_t2.absorbed[j] - &v / &pair.at_t2.stop[j]);
        cp_stop[1].push(pair.at_t2.stop[j].clone());
    }
    let c_prime = AbsorbingGame::new(
        Matrix::from_rows(cp_payoff),
        Matrix::from_rows(cp_stop),
    )
    .expect("stop probabilities unchanged");
    let cp_derived = derived_game(&c_prime);
    if two_row_solve(&cp_derived).value != Rational::zero() {
        return Err(SolverError::PostconditionViolated(
            "shifted derived game must have value zero".into(),
        ));
    }

    let mut scale = BigInt::one();
    for e in cp_derived.matrix().iter() {
        scale = scale.lcm(e.denom());
    }
    let scale_r = Rational::from_integer(scale.clone());
    let d_abs = AbsorbingGame::new(
        c_prime.payoff_matrix().map(|p| p * &scale_r),
        c_prime.stop_matrix().clone(),
    )
    .expect("stop probabilities unchanged");
    let d = GeneralizedBigMatch::new(d_abs)
        .map_err(|e| SolverError::PostconditionViolated(e.to_string()))?;
    let d_derived = d.derived();
    for i in 0..2 {
        for j in 0..columns_j.len() {
            if d_derived.entry(i, j).denom() != &BigInt::one() {
                return Err(SolverError::PostconditionViolated(
                    "derived entries must be integers after scaling".into(),
                ));
            }
        }
    }
    let k_bound = d.max_abs().clone();
    let tau1 = stop_probability_bitsize(g);
    if k_bound > entry_magnitude_bound(m, n, eps_exponent, tau1) {
        return Err(SolverError::PostconditionViolated(
            "derived entries exceed the magnitude bound".into(),
        ));
    }

    let d_solution = two_row_solve(d_derived);
    let pure_row = if d_solution.pure_row_optimal {
        let zero = Rational::zero();
        let row_guarantee = |r: usize| {
            (0..d_derived.cols())
                .map(|j| d_derived.entry(r, j).clone())
                .min()
                .expect("nonempty")
        };
        if row_guarantee(0) == zero {
            Some(0)
        } else {
            debug_assert_eq!(row_guarantee(1), zero);
            Some(1)
        }
    } else {
        None
    };

    Ok(ReductionOutput {
        eps_exponent,
        u,
        x: pair.x,
        x_t2: pair.x_t2,
        t2: pair.t2,
        columns_j,
        c_game,
        c_prime: Some(c_prime),
        v,
        scale,
        d_game: Some(d),
        k_bound,
        pure_row,
    })
}

fn restrict_columns(g: &AbsorbingGame, cols: &[usize]) -> AbsorbingGame {
    let payoff = Matrix::from_rows(
        (0..g.rows())
            .map(|i| cols.iter().map(|&j| g.payoff(i, j).clone()).collect())
            .collect(),
    );
    let stop = Matrix::from_rows(
        (0..g.rows())
            .map(|i| cols.iter().map(|&j| g.stop_prob(i, j).clone()).collect())
            .collect(),
    );
    AbsorbingGame::new(payoff, stop).expect("restriction preserves probabilities")
}

/// Self-contained text form of a reduction, sufficient to rebuild the
/// lifted strategy.
pub fn render_reduction(r: &ReductionOutput) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "reduction v1");
    let _ = writeln!(out, "eps 2^-{}", r.eps_exponent);
    let _ = writeln!(out, "u {}", r.u);
    let _ = writeln!(out, "t2 {}", r.t2);
    let _ = writeln!(out, "v {}", r.v);
    let _ = writeln!(out, "scale {}", r.scale);
    let _ = writeln!(out, "kbound {}", r.k_bound);
    let _ = writeln!(out, "x {}", join(&r.x));
    let _ = writeln!(out, "x_t2 {}", join(&r.x_t2));
    let _ = writeln!(
        out,
        "J {}",
        r.columns_j
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(
        out,
        "pure {}",
        match r.pure_row {
            None => "none".to_owned(),
            Some(row) => row.to_string(),
        }
    );
    let _ = writeln!(out, "C");
    out.push_str(&render_game(&r.c_game));
    let _ = writeln!(out, "endC");
    match &r.c_prime {
        None => {
            let _ = writeln!(out, "Cprime none");
        }
        Some(cp) => {
            let _ = writeln!(out, "Cprime");
            out.push_str(&render_game(cp));
            let _ = writeln!(out, "endCprime");
        }
    }
    match &r.d_game {
        None => {
            let _ = writeln!(out, "D none");
        }
        Some(d) => {
            let _ = writeln!(out, "D");
            out.push_str(&render_game(d.game()));
            let _ = writeln!(out, "endD");
        }
    }
    out
}

fn join(xs: &[Rational]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_reduction(text: &str) -> Result<ReductionOutput, SolverError> {
    let bad = |msg: &str| SolverError::InvalidInput(format!("reduction file: {msg}"));
    let mut lines = text.lines();
    if lines.next() != Some("reduction v1") {
        return Err(bad("missing `reduction v1` header"));
    }
    let mut eps_exponent = None;
    let mut u = None;
    let mut t2 = None;
    let mut v = None;
    let mut scale = None;
    let mut k_bound = None;
    let mut x = None;
    let mut x_t2 = None;
    let mut columns_j = None;
    let mut pure_row: Option<Option<usize>> = None;
    let mut c_game = None;
    let mut c_prime: Option<Option<AbsorbingGame>> = None;
    let mut d_game: Option<Option<AbsorbingGame>> = None;

    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "eps" => {
                let exp = rest
                    .strip_prefix("2^-")
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| bad("eps must be 2^-<l>"))?;
                eps_exponent = Some(exp);
            }
            "u" => u = Some(parse_rational(rest).map_err(|e| bad(&e.to_string()))?),
            "t2" => t2 = Some(parse_rational(rest).map_err(|e| bad(&e.to_string()))?),
            "v" => v = Some(parse_rational(rest).map_err(|e| bad(&e.to_string()))?),
            "scale" => {
                scale = Some(rest.parse::<BigInt>().map_err(|_| bad("bad scale"))?);
            }
            "kbound" => {
                k_bound = Some(rest.parse::<BigInt>().map_err(|_| bad("bad kbound"))?);
            }
            "x" => x = Some(parse_vector(rest).map_err(|e| bad(&e))?),
            "x_t2" => x_t2 = Some(parse_vector(rest).map_err(|e| bad(&e))?),
            "J" => {
                let cols: Result<Vec<usize>, _> =
                    rest.split_whitespace().map(str::parse::<usize>).collect();
                columns_j = Some(cols.map_err(|_| bad("bad column index in J"))?);
            }
            "pure" => {
                pure_row = Some(match rest {
                    "none" => None,
                    s => Some(s.parse::<usize>().map_err(|_| bad("bad pure row"))?),
                });
            }
            "C" => c_game = Some(read_game(&mut lines, "endC").map_err(|e| bad(&e))?),
            "Cprime" => {
                c_prime = Some(if rest == "none" {
                    None
                } else {
                    Some(read_game(&mut lines, "endCprime").map_err(|e| bad(&e))?)
                });
            }
            "D" => {
                d_game = Some(if rest == "none" {
                    None
                } else {
                    Some(read_game(&mut lines, "endD").map_err(|e| bad(&e))?)
                });
            }
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }

    let d_game = match d_game.ok_or_else(|| bad("missing D section"))? {
        None => None,
        Some(abs) => Some(
            GeneralizedBigMatch::new(abs)
                .map_err(|e| bad(&format!("D is not a generalized Big Match game: {e}")))?,
        ),
    };
    Ok(ReductionOutput {
        eps_exponent: eps_exponent.ok_or_else(|| bad("missing eps"))?,
        u: u.ok_or_else(|| bad("missing u"))?,
        x: x.ok_or_else(|| bad("missing x"))?,
        x_t2: x_t2.ok_or_else(|| bad("missing x_t2"))?,
        t2: t2.ok_or_else(|| bad("missing t2"))?,
        columns_j: columns_j.ok_or_else(|| bad("missing J"))?,
        c_game: c_game.ok_or_else(|| bad("missing C"))?,
        c_prime: c_prime.ok_or_else(|| bad("missing Cprime"))?,
        v: v.ok_or_else(|| bad("missing v"))?,
        scale: scale.ok_or_else(|| bad("missing scale"))?,
        d_game,
        k_bound: k_bound.ok_or_else(|| bad("missing kbound"))?,
        pure_row: pure_row.ok_or_else(|| bad("missing pure"))?,
    })
}

fn parse_vector(s: &str) -> Result<Vec<Rational>, String> {
    s.split_whitespace()
        .map(|tok| parse_rational(tok).map_err(|e| e.to_string()))
        .collect()
}

fn read_game<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    terminator: &str,
) -> Result<AbsorbingGame, String> {
    let mut body = String::new();
    for line in lines {
        if line.trim() == terminator {
            return parse_game(&body).map_err(|e| e.to_string());
        }
        body.push_str(line);
        body.push('\n');
    }
    Err(format!("missing `{terminator}`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::COL_L;

    #[test]
    fn big_match_reduction_is_strict() {
        let g = AbsorbingGame::big_match();
        let r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        assert_eq!(r.columns_j, vec![0, 1]);
        let d = r.d_game.as_ref().expect("nondegenerate");
        assert!(d.strict());
        assert!(r.pure_row.is_none());
        // both rows carry positive weight in the unique optimal mixture
        let sol = two_row_solve(d.derived());
        assert_eq!(sol.value, rat(0));
        assert!(sol.top_weight.is_positive());
        assert!(sol.top_weight < Rational::one());
        // x is the limit strategy (1, 0)
        assert_eq!(r.x, vec![rat(1), rat(0)]);
    }

    #[test]
    fn magnitude_bound_holds_for_big_match() {
        let g = AbsorbingGame::big_match();
        let r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        let bound = entry_magnitude_bound(2, 2, 4, 1);
        assert!(r.k_bound <= bound);
        assert!(r.k_bound.is_positive());
    }

    #[test]
    fn all_absorbing_game_degenerates_to_stationary() {
        // Every entry absorbs, so x(t2) absorbs everywhere too and no
        // column has stop mass 0 under x: the reduction keeps no columns
        // and the lifted strategy is the stationary mixture x.
        let g = parse_game("1* 0*\n0* 1*").unwrap();
        let r = reduce(&g, 3, ThresholdMode::Fast).unwrap();
        assert!(r.columns_j.is_empty());
        assert!(r.d_game.is_none());
        // x is optimal in the derived game (value 1/2 for this game)
        let d = derived_game(&g);
        let worst = d
            .row_mixture_payoffs(&r.x)
            .into_iter()
            .min()
            .unwrap();
        assert_eq!(worst, game_value(&d));
        let _ = COL_L;
    }

    #[test]
    fn rejects_payoffs_outside_unit_box() {
        let g = parse_game("2 0\n0* 1*").unwrap();
        assert!(matches!(
            reduce(&g, 3, ThresholdMode::Fast),
            Err(SolverError::InvalidInput(_))
        ));
    }

    #[test]
    fn reduction_file_round_trip() {
        let g = AbsorbingGame::big_match();
        let r = reduce(&g, 4, ThresholdMode::Fast).unwrap();
        let text = render_reduction(&r);
        let back = parse_reduction(&text).unwrap();
        assert_eq!(back.u, r.u);
        assert_eq!(back.t2, r.t2);
        assert_eq!(back.x, r.x);
        assert_eq!(back.x_t2, r.x_t2);
        assert_eq!(back.columns_j, r.columns_j);
        assert_eq!(back.v, r.v);
        assert_eq!(back.scale, r.scale);
        assert_eq!(back.k_bound, r.k_bound);
        assert_eq!(back.pure_row, r.pure_row);
        assert_eq!(
            back.d_game.as_ref().unwrap().game(),
            r.d_game.as_ref().unwrap().game()
        );
        // rendering is stable
        assert_eq!(render_reduction(&back), text);
    }
}
