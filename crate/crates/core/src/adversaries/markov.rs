//! Pure Markov programs: the column is a function of the round number.

use super::AdversaryError;
use crate::games::{COL_L, COL_R};
use crate::numeric::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkovProgram {
    ConstL,
    ConstR,
    /// Repeats a fixed word forever (1-based cyclic indexing).
    Periodic(Vec<usize>),
    /// Blocks of L then R with doubling lengths `1, 2, 4, ...`; prefix
    /// densities oscillate between about 1/3 and 2/3.
    DoublingAlternation,
}

impl MarkovProgram {
    pub fn periodic_word(word: &str) -> Result<Self, AdversaryError> {
        let cols: Result<Vec<usize>, _> = word
            .chars()
            .map(|c| match c {
                'L' => Ok(COL_L),
                'R' => Ok(COL_R),
                other => Err(AdversaryError::BadSpec(format!(
                    "word letters must be L or R, got `{other}`"
                ))),
            })
            .collect();
        let cols = cols?;
        if cols.is_empty() {
            return Err(AdversaryError::BadSpec("empty word".into()));
        }
        Ok(MarkovProgram::Periodic(cols))
    }

    /// A periodic word of length `len` realizing density `target`
    /// exactly, with the L's spread evenly (Bresenham). Requires
    /// `target * len` integral.
    pub fn density_target(target: &Rational, len: u64) -> Result<Self, AdversaryError> {
        if target.is_negative() || target > &Rational::from_integer(1.into()) {
            return Err(AdversaryError::InvalidParameter(
                "density must lie in [0,1]".into(),
            ));
        }
        if len == 0 {
            return Err(AdversaryError::InvalidParameter("length must be positive".into()));
        }
        let total = target * Rational::from_integer(BigInt::from(len));
        if !total.is_integer() {
            return Err(AdversaryError::InvalidParameter(format!(
                "density {target} is not realizable in a word of length {len}"
            )));
        }
        let l_count = total.to_integer().to_u64().expect("within range");
        let mut word = Vec::with_capacity(len as usize);
        let mut acc = 0u64;
        for pos in 1..=len {
            // L at pos iff floor(pos * l/len) increments
            let next = pos * l_count / len;
            word.push(if next > acc { COL_L } else { COL_R });
            acc = next;
        }
        Ok(MarkovProgram::Periodic(word))
    }

    pub fn label(&self) -> String {
        match self {
            MarkovProgram::ConstL => "constL".into(),
            MarkovProgram::ConstR => "constR".into(),
            MarkovProgram::Periodic(w) => {
                let letters: String = w
                    .iter()
                    .map(|&c| if c == COL_L { 'L' } else { 'R' })
                    .collect();
                format!("word:{letters}")
            }
            MarkovProgram::DoublingAlternation => "doubling".into(),
        }
    }
}

/// The deterministic column at a 1-based round.
pub fn markov_action(p: &MarkovProgram, round: u64) -> usize {
    debug_assert!(round >= 1);
    match p {
        MarkovProgram::ConstL => COL_L,
        MarkovProgram::ConstR => COL_R,
        MarkovProgram::Periodic(word) => word[((round - 1) % word.len() as u64) as usize],
        MarkovProgram::DoublingAlternation => {
            // block a = floor(log2(round)) spans rounds [2^a, 2^(a+1));
            // even blocks are L
            let a = 63 - round.leading_zeros();
            if a % 2 == 0 {
                COL_L
            } else {
                COL_R
            }
        }
    }
}
