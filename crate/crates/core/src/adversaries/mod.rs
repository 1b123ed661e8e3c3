//! Player 2 opponents: pure Markov programs (the action is a function of
//! the round number alone) and the randomized phase adversary used to
//! witness the patience lower bound.

mod markov;
mod phase;

pub use markov::{markov_action, MarkovProgram};
pub use phase::{phase_adversary_action, PhaseAdversaryConfig};

use crate::numeric::parse_rational;
use crate::sim::FairBits;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bad adversary spec: {0}")]
    BadSpec(String),
}

/// A Player 2 opponent: deterministic given `(round, own bit stream)`.
#[derive(Debug, Clone)]
pub enum Adversary {
    Markov(MarkovProgram),
    Phase(PhaseAdversaryConfig),
}

impl Adversary {
    pub fn act(&self, round: u64, bits: &mut FairBits) -> usize {
        match self {
            Adversary::Markov(p) => markov_action(p, round),
            Adversary::Phase(cfg) => phase_adversary_action(cfg, round, bits),
        }
    }

    /// Column count this adversary plays over (always the two-column
    /// L/R alphabet).
    pub fn cols(&self) -> usize {
        2
    }

    pub fn label(&self) -> String {
        match self {
            Adversary::Markov(p) => p.label(),
            Adversary::Phase(cfg) => format!("phase:eps={},k={}", cfg.eps, cfg.opening_phases),
        }
    }
}

/// Spec grammar: `constL | constR | word:<LR-string> | dens:<rat>,len=<n>
/// | doubling | phase:eps=<rat>,k=<n>`.
pub fn parse_p2_spec(text: &str) -> Result<Adversary, AdversaryError> {
    let bad = |msg: String| AdversaryError::BadSpec(msg);
    if text == "constL" {
        return Ok(Adversary::Markov(MarkovProgram::ConstL));
    }
    if text == "constR" {
        return Ok(Adversary::Markov(MarkovProgram::ConstR));
    }
    if text == "doubling" {
        return Ok(Adversary::Markov(MarkovProgram::DoublingAlternation));
    }
    if let Some(word) = text.strip_prefix("word:") {
        return Ok(Adversary::Markov(MarkovProgram::periodic_word(word).map_err(
            |e| bad(e.to_string()),
        )?));
    }
    if let Some(rest) = text.strip_prefix("dens:") {
        let (d, len) = rest
            .split_once(",len=")
            .ok_or_else(|| bad("dens needs `,len=<n>`".into()))?;
        let target = parse_rational(d).map_err(|e| bad(e.to_string()))?;
        let len: u64 = len.parse().map_err(|_| bad("bad length".into()))?;
        return Ok(Adversary::Markov(
            MarkovProgram::density_target(&target, len).map_err(|e| bad(e.to_string()))?,
        ));
    }
    if let Some(rest) = text.strip_prefix("phase:") {
        let mut eps = None;
        let mut k = None;
        for kv in rest.split(',') {
            match kv.split_once('=') {
                Some(("eps", v)) => eps = Some(parse_rational(v).map_err(|e| bad(e.to_string()))?),
                Some(("k", v)) => k = Some(v.parse::<u32>().map_err(|_| bad("bad k".into()))?),
                _ => return Err(bad(format!("unknown phase field `{kv}`"))),
            }
        }
        let eps = eps.ok_or_else(|| bad("phase needs eps".into()))?;
        let k = k.ok_or_else(|| bad("phase needs k".into()))?;
        return Ok(Adversary::Phase(
            PhaseAdversaryConfig::new(&eps, k).map_err(|e| bad(e.to_string()))?,
        ));
    }
    Err(bad(format!("unknown adversary `{text}`")))
}

/// The fixed, versioned adversary suite used by acceptance runs.
pub fn acceptance_suite() -> Vec<Adversary> {
    let specs = [
        "constL",
        "constR",
        "dens:1/4,len=4",
        "dens:2/5,len=5",
        "dens:3/4,len=4",
        "doubling",
        "phase:eps=1/10,k=3",
    ];
    specs
        .iter()
        .map(|s| parse_p2_spec(s).expect("suite specs are valid"))
        .collect()
}

/// The fraction of density targets in the suite label order, used by
/// reports.
pub fn suite_labels() -> Vec<String> {
    acceptance_suite().iter().map(Adversary::label).collect()
}
