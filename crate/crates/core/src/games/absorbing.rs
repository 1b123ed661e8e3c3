//! Repeated games with absorbing states in matrix form, and the
//! generalized Big Match subclass.

use super::{GameError, MatrixGame};
use crate::numeric::{Matrix, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub const ROW_L: usize = 0;
pub const ROW_R: usize = 1;
pub const COL_L: usize = 0;
pub const COL_R: usize = 1;

/// An `m x n` repeated game with absorbing states: stage payoffs and
/// per-entry stop probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbingGame {
    payoff: Matrix,
    stop: Matrix,
}

impl AbsorbingGame {
    pub fn new(payoff: Matrix, stop: Matrix) -> Result<Self, GameError> {
        assert_eq!(payoff.rows(), stop.rows());
        assert_eq!(payoff.cols(), stop.cols());
        for i in 0..stop.rows() {
            for j in 0..stop.cols() {
                let w = &stop[(i, j)];
                if w.is_negative() || w > &Rational::one() {
                    return Err(GameError::StopProbabilityRange { row: i, col: j });
                }
            }
        }
        Ok(AbsorbingGame { payoff, stop })
    }

    pub fn rows(&self) -> usize {
        self.payoff.rows()
    }

    pub fn cols(&self) -> usize {
        self.payoff.cols()
    }

    pub fn payoff(&self, i: usize, j: usize) -> &Rational {
        &self.payoff[(i, j)]
    }

    pub fn stop_prob(&self, i: usize, j: usize) -> &Rational {
        &self.stop[(i, j)]
    }

    pub fn payoff_matrix(&self) -> &Matrix {
        &self.payoff
    }

    pub fn stop_matrix(&self) -> &Matrix {
        &self.stop
    }

    pub fn min_payoff(&self) -> Rational {
        self.payoff.iter().min().cloned().expect("nonempty game")
    }

    pub fn max_payoff(&self) -> Rational {
        self.payoff.iter().max().cloned().expect("nonempty game")
    }

    /// The Big Match: Player 1 stops on R; matching actions pay 1.
    pub fn big_match() -> Self {
        use crate::numeric::rat;
        AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]),
            Matrix::from_rows(vec![vec![rat(0), rat(0)], vec![rat(1), rat(1)]]),
        )
        .expect("valid stop probabilities")
    }

    /// The Big Match with payoffs shifted to `{-1, 1}`, whose derived
    /// matrix game has value 0.
    pub fn zero_value_big_match() -> Self {
        use crate::numeric::rat;
        AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(1)]]),
            Matrix::from_rows(vec![vec![rat(0), rat(0)], vec![rat(1), rat(1)]]),
        )
        .expect("valid stop probabilities")
    }

    pub fn is_big_match(&self) -> bool {
        self == &AbsorbingGame::big_match()
    }
}

/// Derived matrix game: absorbing entries are replaced by `stop * payoff`.
pub fn derived_game(g: &AbsorbingGame) -> MatrixGame {
    let rows = (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| {
                    let w = g.stop_prob(i, j);
                    if w.is_zero() {
                        g.payoff(i, j).clone()
                    } else {
                        w * g.payoff(i, j)
                    }
                })
                .collect()
        })
        .collect();
    MatrixGame::from_rows(rows)
}

/// The auxiliary matrix game `A(u, t)` with entries
/// `w*b + (1-w)*(t*b + (1-t)*u)`.
pub fn auxiliary_game(g: &AbsorbingGame, u: &Rational, t: &Rational) -> MatrixGame {
    let (a1, a2) = auxiliary_split(g, u);
    let rows = (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| a1.entry(i, j) + t * a2.entry(i, j))
                .collect()
        })
        .collect();
    MatrixGame::from_rows(rows)
}

/// The split `A(u, t) = A1 + t*A2` with `A1 = w*b + (1-w)*u` and
/// `A2 = (1-w)*(b-u)`.
pub fn auxiliary_split(g: &AbsorbingGame, u: &Rational) -> (MatrixGame, MatrixGame) {
    let one = Rational::one();
    let mut rows1 = Vec::with_capacity(g.rows());
    let mut rows2 = Vec::with_capacity(g.rows());
    for i in 0..g.rows() {
        let mut r1 = Vec::with_capacity(g.cols());
        let mut r2 = Vec::with_capacity(g.cols());
        for j in 0..g.cols() {
            let b = g.payoff(i, j);
            let w = g.stop_prob(i, j);
            let keep = &one - w;
            r1.push(w * b + &keep * u);
            r2.push(&keep * &(b - u));
        }
        rows1.push(r1);
        rows2.push(r2);
    }
    (MatrixGame::from_rows(rows1), MatrixGame::from_rows(rows2))
}

/// Exact solution of a two-row matrix game by direct envelope analysis.
///
/// This is independent of the simplex solver and is what the generalized
/// Big Match assumption audit uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoRowSolution {
    pub value: Rational,
    /// Probability on the top row in some optimal mixture.
    pub top_weight: Rational,
    /// Whether a pure row strategy attains the value.
    pub pure_row_optimal: bool,
}

pub fn two_row_solve(game: &MatrixGame) -> TwoRowSolution {
    assert_eq!(game.rows(), 2, "two_row_solve requires exactly two rows");
    let guaranteed = |x: &Rational| -> Rational {
        let one_minus = Rational::one() - x;
        (0..game.cols())
            .map(|j| x * game.entry(0, j) + &one_minus * game.entry(1, j))
            .min()
            .expect("at least one column")
    };

    let mut candidates = vec![Rational::zero(), Rational::one()];
    for j in 0..game.cols() {
        for k in j + 1..game.cols() {
            // intersection of the two column lines in x
            let dj = game.entry(0, j) - game.entry(1, j);
            let dk = game.entry(0, k) - game.entry(1, k);
            let denom = &dj - &dk;
            if denom.is_zero() {
                continue;
            }
            let x = (game.entry(1, k) - game.entry(1, j)) / denom;
            if !x.is_negative() && x <= Rational::one() {
                candidates.push(x);
            }
        }
    }

    let mut best_x = Rational::zero();
    let mut best_v = guaranteed(&best_x);
    for x in candidates {
        let v = guaranteed(&x);
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    let pure_row_optimal =
        guaranteed(&Rational::zero()) == best_v || guaranteed(&Rational::one()) == best_v;
    TwoRowSolution {
        value: best_v,
        top_weight: best_x,
        pure_row_optimal,
    }
}

/// A generalized Big Match game: two rows, the top row (L) never stops,
/// the bottom row (R) stops with positive probability in every column.
#[derive(Debug, Clone)]
pub struct GeneralizedBigMatch {
    game: AbsorbingGame,
    derived: MatrixGame,
    min_stop: Rational,
    max_abs: BigInt,
    counter_steps: Vec<BigInt>,
    strict: bool,
    is_big_match: bool,
}

impl GeneralizedBigMatch {
    /// Validates the structural shape. The derived-game assumption (integer
    /// entries, value 0, no pure optimal row strategy) is checked too; games
    /// that fail it are still usable where only the shape matters, but
    /// `strict()` reports false.
    ///
    /// The literal Big Match (value 1/2) is accepted as a special case: its
    /// counter dynamics are taken from the payoff-shifted variant whose
    /// derived game has value 0.
    pub fn new(game: AbsorbingGame) -> Result<Self, GameError> {
        if game.rows() != 2 {
            return Err(GameError::NotGeneralizedBigMatch(format!(
                "expected 2 rows, found {}",
                game.rows()
            )));
        }
        for j in 0..game.cols() {
            if !game.stop_prob(ROW_L, j).is_zero() {
                return Err(GameError::NotGeneralizedBigMatch(format!(
                    "row L stops in column {j}"
                )));
            }
            if !game.stop_prob(ROW_R, j).is_positive() {
                return Err(GameError::NotGeneralizedBigMatch(format!(
                    "row R never stops in column {j}"
                )));
            }
        }
        let is_big_match = game.is_big_match();
        let effective = if is_big_match {
            AbsorbingGame::zero_value_big_match()
        } else {
            game.clone()
        };
        let derived = derived_game(&effective);
        let min_stop = (0..game.cols())
            .map(|j| game.stop_prob(ROW_R, j).clone())
            .min()
            .expect("at least one column");

        let integer_entries = (0..2).all(|i| {
            (0..derived.cols()).all(|j| derived.entry(i, j).denom() == &BigInt::one())
        });
        let strict = if integer_entries {
            let sol = two_row_solve(&derived);
            sol.value.is_zero() && !sol.pure_row_optimal
        } else {
            false
        };

        let counter_steps: Vec<BigInt> = (0..derived.cols())
            .map(|j| {
                let e = derived.entry(ROW_R, j);
                // ceil(|e|) with sign; exact integer under the assumption
                if e.denom() == &BigInt::one() {
                    e.numer().clone()
                } else {
                    e.ceil().to_integer()
                }
            })
            .collect();
        let max_abs = counter_steps
            .iter()
            .map(Signed::abs)
            .chain((0..derived.cols()).map(|j| {
                let e = derived.entry(ROW_L, j);
                e.abs().ceil().to_integer()
            }))
            .max()
            .expect("nonempty");

        Ok(GeneralizedBigMatch {
            game,
            derived,
            min_stop,
            max_abs,
            counter_steps,
            strict,
            is_big_match,
        })
    }

    pub fn big_match() -> Self {
        GeneralizedBigMatch::new(AbsorbingGame::big_match()).expect("valid")
    }

    pub fn zero_value_big_match() -> Self {
        GeneralizedBigMatch::new(AbsorbingGame::zero_value_big_match()).expect("valid")
    }

    pub fn game(&self) -> &AbsorbingGame {
        &self.game
    }

    /// Derived matrix game driving the counter dynamics. For the literal
    /// Big Match this is the value-0 shifted form.
    pub fn derived(&self) -> &MatrixGame {
        &self.derived
    }

    pub fn cols(&self) -> usize {
        self.game.cols()
    }

    /// Minimum stop probability of row R.
    pub fn min_stop(&self) -> &Rational {
        &self.min_stop
    }

    /// Maximum magnitude of a derived entry.
    pub fn max_abs(&self) -> &BigInt {
        &self.max_abs
    }

    /// Amount subtracted from the base-strategy counter when column `j`
    /// is observed: the derived row-R entry.
    pub fn counter_step(&self, j: usize) -> &BigInt {
        &self.counter_steps[j]
    }

    /// Whether the derived-game assumption holds (or the game is the
    /// literal Big Match, which is handled specially).
    pub fn strict(&self) -> bool {
        self.strict || self.is_big_match
    }

    pub fn is_big_match(&self) -> bool {
        self.is_big_match
    }

    pub fn require_strict(&self) -> Result<(), GameError> {
        if self.strict() {
            Ok(())
        } else {
            Err(GameError::AssumptionViolated(
                "derived game must have integer entries, value 0 and no pure optimal row"
                    .to_owned(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};

    #[test]
    fn big_match_derived_game() {
        let d = derived_game(&AbsorbingGame::big_match());
        assert_eq!(d.entry(0, 0), &rat(1));
        assert_eq!(d.entry(0, 1), &rat(0));
        assert_eq!(d.entry(1, 0), &rat(0));
        assert_eq!(d.entry(1, 1), &rat(1));
    }

    #[test]
    fn zero_value_big_match_derived_game() {
        let d = derived_game(&AbsorbingGame::zero_value_big_match());
        let expect = MatrixGame::from_rows(vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(1)]]);
        assert_eq!(d, expect);
    }

    #[test]
    fn derived_entry_is_product_when_absorbing() {
        let g = AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(4)]]),
            Matrix::from_rows(vec![vec![ratio(1, 2)]]),
        )
        .unwrap();
        assert_eq!(derived_game(&g).entry(0, 0), &rat(2));
    }

    #[test]
    fn auxiliary_game_big_match_at_zero() {
        // u = 1/2, t = 0: [[1/2, 1/2], [0, 1]]
        let a = auxiliary_game(&AbsorbingGame::big_match(), &ratio(1, 2), &rat(0));
        assert_eq!(a.entry(0, 0), &ratio(1, 2));
        assert_eq!(a.entry(0, 1), &ratio(1, 2));
        assert_eq!(a.entry(1, 0), &rat(0));
        assert_eq!(a.entry(1, 1), &rat(1));
    }

    #[test]
    fn auxiliary_game_at_t_one_ignores_u() {
        let g = AbsorbingGame::big_match();
        let a = auxiliary_game(&g, &ratio(1, 3), &rat(1));
        let b = auxiliary_game(&g, &ratio(9, 10), &rat(1));
        assert_eq!(a, b);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.entry(i, j), g.payoff(i, j));
            }
        }
    }

    #[test]
    fn auxiliary_game_all_absorbing_equals_derived() {
        let g = AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(3), rat(-2)], vec![rat(1), rat(5)]]),
            Matrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]]),
        )
        .unwrap();
        let d = derived_game(&g);
        for (u, t) in [(ratio(1, 3), ratio(1, 7)), (rat(-2), rat(0))] {
            assert_eq!(auxiliary_game(&g, &u, &t), d);
        }
    }

    #[test]
    fn rejects_bad_stop_probability() {
        let r = AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(1)]]),
            Matrix::from_rows(vec![vec![ratio(3, 2)]]),
        );
        assert_eq!(
            r.unwrap_err(),
            GameError::StopProbabilityRange { row: 0, col: 0 }
        );
    }

    #[test]
    fn two_row_solve_matching_pennies() {
        let g = MatrixGame::from_rows(vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(1)]]);
        let sol = two_row_solve(&g);
        assert_eq!(sol.value, rat(0));
        assert_eq!(sol.top_weight, ratio(1, 2));
        assert!(!sol.pure_row_optimal);
    }

    #[test]
    fn big_match_is_accepted_and_special_cased() {
        let g = GeneralizedBigMatch::big_match();
        assert!(g.is_big_match());
        assert!(g.strict());
        assert_eq!(g.max_abs(), &BigInt::from(1));
        assert_eq!(g.min_stop(), &rat(1));
        assert_eq!(g.counter_step(COL_L), &BigInt::from(-1));
        assert_eq!(g.counter_step(COL_R), &BigInt::from(1));
    }

    #[test]
    fn zero_value_form_is_strict() {
        let g = GeneralizedBigMatch::zero_value_big_match();
        assert!(!g.is_big_match());
        assert!(g.strict());
        assert_eq!(g.counter_step(COL_L), &BigInt::from(-1));
        assert_eq!(g.counter_step(COL_R), &BigInt::from(1));
    }

    #[test]
    fn rejects_wrong_shape() {
        let g = AbsorbingGame::new(
            Matrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]),
            Matrix::from_rows(vec![vec![rat(0), rat(0)], vec![rat(0), rat(1)]]),
        )
        .unwrap();
        assert!(matches!(
            GeneralizedBigMatch::new(g),
            Err(GameError::NotGeneralizedBigMatch(_))
        ));
    }
}
