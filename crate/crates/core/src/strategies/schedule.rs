//! Epoch schedules: target epoch lengths `F(i)` and the per-round
//! sampling probability `i^3 / F(i)`.
//!
//! The log-log instantiation uses `F(i) = 2^i`. A tabulated non-decreasing
//! unbounded space budget `f` is converted to `F` by inverting a strictly
//! increasing minorant and repairing with a doubling floor so that
//! `F(1) = 1` and `F(i+1) >= 2 F(i)` always hold. Early epochs where
//! `i^3 > F(i)` sample every round (the probability clamps to 1); a
//! schedule whose final supported epoch still violates `F(i) >= i^3` is
//! rejected, since sampling would never become well-formed.

use super::StrategyError;
use crate::numeric::Rational;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    /// `F(i) = 2^i`.
    LogLog,
    /// Tabulated lengths for epochs `1..=table.len()`; beyond the table
    /// the doubling rule `F(i+1) = 2 F(i)` extends the schedule.
    Table(Vec<BigUint>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochSchedule {
    kind: Kind,
    label: String,
}

impl EpochSchedule {
    /// The `f(T) = ceil(log T)` instantiation: `F(i) = 2^i`.
    pub fn loglog() -> Self {
        EpochSchedule {
            kind: Kind::LogLog,
            label: "loglog".to_owned(),
        }
    }

    /// Builds a schedule from a tabulated non-decreasing unbounded map
    /// `f`, given as `(T, f(T))` pairs sorted by `T`.
    pub fn from_f(pairs: &[(u64, u64)]) -> Result<Self, StrategyError> {
        if pairs.is_empty() {
            return Err(StrategyError::InvalidSchedule("empty table".into()));
        }
        for w in pairs.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(StrategyError::InvalidSchedule(
                    "rounds must be strictly increasing".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(StrategyError::InvalidSchedule(
                    "f must be non-decreasing".into(),
                ));
            }
        }
        let max_level = pairs.last().unwrap().1;
        if max_level < 1 {
            return Err(StrategyError::InvalidSchedule(
                "f never reaches level 1".into(),
            ));
        }
        // F(i) = max(2 F(i-1), min{T : f(T) >= i}), F(1) = 1
        let mut table: Vec<BigUint> = vec![BigUint::one()];
        for level in 2..=max_level {
            let threshold = pairs
                .iter()
                .find(|(_, f)| *f >= level)
                .map(|(t, _)| BigUint::from(*t))
                .expect("level <= max_level");
            let doubled = table.last().unwrap() * 2u8;
            table.push(std::cmp::max(doubled, threshold));
        }
        let schedule = EpochSchedule {
            kind: Kind::Table(table),
            label: "tabulated".to_owned(),
        };
        // The tail must reach the sampling-validity regime.
        let last = schedule
            .table_len()
            .expect("tabulated schedule has a table");
        let i = last as u32;
        let cube = BigUint::from(i).pow(3);
        if schedule.length(i) < cube {
            return Err(StrategyError::InvalidSchedule(format!(
                "F({i}) < {i}^3 at the last supported epoch; sampling never becomes valid"
            )));
        }
        Ok(schedule)
    }

    fn table_len(&self) -> Option<usize> {
        match &self.kind {
            Kind::LogLog => None,
            Kind::Table(t) => Some(t.len()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Target epoch length `F(i)`, `i >= 1`.
    pub fn length(&self, i: u32) -> BigUint {
        match &self.kind {
            Kind::LogLog => BigUint::one() << i,
            Kind::Table(t) => {
                let idx = (i as usize).saturating_sub(1);
                if idx < t.len() {
                    t[idx].clone()
                } else {
                    // doubling extension beyond the table
                    t.last().unwrap() << (idx + 1 - t.len())
                }
            }
        }
    }

    pub fn length_u64(&self, i: u32) -> Option<u64> {
        self.length(i).to_u64()
    }

    /// Per-round sampling probability of epoch `i`: `min(1, i^3 / F(i))`.
    pub fn sample_prob(&self, i: u32) -> Rational {
        let cube = BigUint::from(i).pow(3);
        let len = self.length(i);
        if cube >= len {
            Rational::one()
        } else {
            Rational::new(cube.into(), len.into())
        }
    }

    /// Whether epoch `i` samples every round.
    pub fn is_clamped(&self, i: u32) -> bool {
        BigUint::from(i).pow(3) >= self.length(i)
    }
}
