//! Finite distributions with exact rational probabilities.

use crate::numeric::Rational;
use crate::sim::FairBits;
use num_traits::{One, Signed, Zero};

/// A finite distribution; probabilities are positive and sum to one
/// exactly (zero-probability outcomes are dropped on construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist<T> {
    items: Vec<(T, Rational)>,
}

impl<T> Dist<T> {
    pub fn new(items: Vec<(T, Rational)>) -> Self {
        let items: Vec<(T, Rational)> = items
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        assert!(
            items.iter().all(|(_, p)| p.is_positive()),
            "negative probability"
        );
        let total: Rational = items.iter().map(|(_, p)| p.clone()).sum();
        assert!(total.is_one(), "probabilities sum to {total}, not 1");
        Dist { items }
    }

    pub fn point(value: T) -> Self {
        Dist {
            items: vec![(value, Rational::one())],
        }
    }

    pub fn items(&self) -> &[(T, Rational)] {
        &self.items
    }

    pub fn is_degenerate(&self) -> bool {
        self.items.len() == 1
    }

    pub fn probability_of(&self, pred: impl Fn(&T) -> bool) -> Rational {
        self.items
            .iter()
            .filter(|(t, _)| pred(t))
            .map(|(_, p)| p.clone())
            .sum()
    }

    pub fn sample<'a>(&'a self, bits: &mut FairBits) -> &'a T {
        if self.items.len() == 1 {
            return &self.items[0].0;
        }
        let probs: Vec<Rational> = self.items.iter().map(|(_, p)| p.clone()).collect();
        &self.items[bits.sample_index(&probs)].0
    }

    pub fn sample_owned(self, bits: &mut FairBits) -> T
    where
        T: Clone,
    {
        if self.items.len() == 1 {
            return self.items.into_iter().next().unwrap().0;
        }
        let probs: Vec<Rational> = self.items.iter().map(|(_, p)| p.clone()).collect();
        let idx = bits.sample_index(&probs);
        self.items.into_iter().nth(idx).unwrap().0
    }
}
