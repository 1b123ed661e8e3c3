//! Sub-epoch length statistics from a sample-point log.

use super::SimError;
use crate::games::Transcript;
use crate::numeric::Rational;
use crate::strategies::EpochSchedule;
use num_bigint::BigInt;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubEpochRecord {
    pub epoch: u32,
    pub sub_epoch: u32,
    /// Rounds between this sub-epoch's last sample and the previous one's.
    pub length: u64,
    /// Outside `[(1-delta) F(i)/i, (1+delta) F(i)/i]`.
    pub flagged: bool,
    /// Epoch sampled every round (deterministic lengths).
    pub clamped: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SubEpochStats {
    pub records: Vec<SubEpochRecord>,
}

impl SubEpochStats {
    /// Fraction of flagged records among non-clamped sub-epochs with
    /// epoch at least `min_epoch`; `None` when there are none.
    pub fn flagged_fraction(&self, min_epoch: u32) -> Option<Rational> {
        let eligible: Vec<&SubEpochRecord> = self
            .records
            .iter()
            .filter(|r| r.epoch >= min_epoch && !r.clamped)
            .collect();
        if eligible.is_empty() {
            return None;
        }
        let flagged = eligible.iter().filter(|r| r.flagged).count();
        Some(Rational::new(
            BigInt::from(flagged),
            BigInt::from(eligible.len()),
        ))
    }
}

/// Tabulates completed sub-epoch lengths `t(i,j,i^2) - t(i,j-1,i^2)` from
/// a recorded sample log and flags those outside the `delta`-band around
/// `F(i)/i`.
pub fn subepoch_stats(
    tr: &Transcript,
    schedule: &EpochSchedule,
    delta: &Rational,
) -> Result<SubEpochStats, SimError> {
    let log = tr.sample_log.as_ref().ok_or(SimError::NotRecorded)?;
    let mut records = Vec::new();
    let mut prev_completion: Option<u64> = None;
    for point in log {
        let capacity = u64::from(point.epoch) * u64::from(point.epoch);
        if point.sample_index != capacity {
            continue;
        }
        if let Some(prev) = prev_completion {
            let length = point.round - prev;
            let target = Rational::new(
                BigInt::from(schedule.length(point.epoch)),
                BigInt::from(point.epoch),
            );
            let low = (Rational::one() - delta) * &target;
            let high = (Rational::one() + delta) * &target;
            let len_r = Rational::from_integer(BigInt::from(length));
            records.push(SubEpochRecord {
                epoch: point.epoch,
                sub_epoch: point.sub_epoch,
                length,
                flagged: len_r < low || len_r > high,
                clamped: schedule.is_clamped(point.epoch),
            });
        }
        prev_completion = Some(point.round);
    }
    Ok(SubEpochStats { records })
}
