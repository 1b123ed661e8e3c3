//! Reproducible randomness: a counter-mixed 64-bit generator, a fair-bit
//! stream with exact accounting, and exact Bernoulli sampling for rational
//! probabilities.
//!
//! Every random event in a simulation is drawn by comparing a lazily
//! revealed uniform `U` against the binary expansion of the event
//! probability, so rational probabilities are realized exactly and the
//! expected number of fair bits per event is at most 2.

use crate::numeric::Rational;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// SplitMix64: tiny, fast, and stable across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

/// Stream derivation: replica `r`, lane `l` of a master seed uses the
/// SplitMix64 stream seeded with `mix(master ^ mix(r+1) ^ mix(l+1) <<< 1)`.
/// Lanes keep Player 1's strategy bits, the opponent's bits and the
/// absorption lottery on independent streams.
pub fn derive_stream(master: u64, replica: u64, lane: u64) -> SplitMix64 {
    fn mix(x: u64) -> u64 {
        let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    let seed = mix(master ^ mix(replica.wrapping_add(1)) ^ mix(lane.wrapping_add(1)).rotate_left(1));
    SplitMix64::new(seed)
}

/// A stream of fair coin flips with an exact consumption counter.
#[derive(Debug, Clone)]
pub struct FairBits {
    rng: SplitMix64,
    buffer: u64,
    available: u32,
    consumed: u64,
}

impl FairBits {
    pub fn new(rng: SplitMix64) -> Self {
        FairBits {
            rng,
            buffer: 0,
            available: 0,
            consumed: 0,
        }
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.available == 0 {
            self.buffer = self.rng.next_u64();
            self.available = 64;
        }
        let bit = self.buffer & 1 == 1;
        self.buffer >>= 1;
        self.available -= 1;
        self.consumed += 1;
        bit
    }

    /// Uniform draw from `0..n` by rejection on `ceil(log2 n)` bits.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let bits = 64 - (n - 1).leading_zeros();
        loop {
            let mut v = 0u64;
            for _ in 0..bits {
                v = (v << 1) | u64::from(self.next_bit());
            }
            if v < n {
                return v;
            }
        }
    }

    /// Exact Bernoulli draw for a rational probability, by lazy comparison
    /// of a uniform against the binary expansion of `p`. Certain events
    /// (p = 0 or 1) consume no bits.
    pub fn bernoulli(&mut self, p: &Rational) -> bool {
        if p.is_zero() || p.numer().is_negative() {
            return false;
        }
        if p >= &Rational::one() {
            return true;
        }
        // walk digits of p = n/q: digit = [2n >= q], n <- 2n - digit*q
        let mut n: BigUint = p.numer().magnitude().clone();
        let q: &BigUint = p.denom().magnitude();
        loop {
            n <<= 1;
            let digit = if &n >= q {
                n -= q;
                true
            } else {
                false
            };
            let bit = self.next_bit();
            if bit != digit {
                // U differs from p here: U < p exactly when the U bit is 0
                return !bit;
            }
            if n.is_zero() {
                // expansion terminated; U == p prefix means U >= p
                return false;
            }
        }
    }

    /// Exact Bernoulli draw against a precompiled digit prefix.
    pub fn bernoulli_compiled(&mut self, p: &CompiledProb) -> bool {
        match p.certain {
            Some(v) => return v,
            None => {}
        }
        for idx in 0..p.nbits {
            let digit = p.digit(idx);
            let bit = self.next_bit();
            if bit != digit {
                return !bit;
            }
        }
        match &p.tail {
            None => false, // expansion terminated at nbits: U == prefix means U >= p
            Some(tail) => self.bernoulli(tail),
        }
    }

    /// Exact Bernoulli draw for `coef * base^exp` with `coef in [0,1]`,
    /// `base in (0,1]`, using interval refinement; the power is never
    /// expanded exactly.
    pub fn bernoulli_scaled_pow(&mut self, coef: &Rational, base: &Rational, exp: &BigUint) -> bool {
        if coef.is_zero() {
            return false;
        }
        if exp.is_zero() || base.is_one() {
            return self.bernoulli(coef);
        }
        // u in [u_num/2^k, (u_num+1)/2^k); p in [p_lo, p_hi]
        let mut u_num = BigUint::zero();
        let mut k = 0u64;
        let mut precision = 64u64;
        let (mut p_lo, mut p_hi) = (Rational::zero(), coef.clone());
        loop {
            let scale = BigInt::one() << k;
            let u_lo = Rational::new(BigInt::from(u_num.clone()), scale.clone());
            let u_hi = Rational::new(BigInt::from(&u_num + 1u8), scale);
            if u_hi <= p_lo {
                return true;
            }
            if u_lo >= p_hi {
                return false;
            }
            if &p_hi - &p_lo > &u_hi - &u_lo {
                // p interval is the blunt one: tighten it
                let (lo, hi) = pow_bounds(base, exp, precision);
                p_lo = coef * &lo;
                p_hi = coef * &hi;
                precision *= 2;
            } else {
                u_num = (u_num << 1) | BigUint::from(u8::from(self.next_bit()));
                k += 1;
            }
        }
    }

    /// Draws `G` with `P(G = x) = q^(x-1) (1-q)` for `x >= 1` (the round
    /// index of the next success when each round succeeds with
    /// probability `1-q`), capped at `2^62`.
    ///
    /// Inversion: `G = min{x : q^x <= U}` for a lazily revealed uniform
    /// `U`; the powers of `q` are never expanded, only bracketed by
    /// directed-rounding bounds at escalating precision, so the draw is
    /// exact and consumes about `log2(1/(1-q)) + O(1)` bits.
    pub fn geometric(&mut self, q: &Rational) -> u64 {
        const CAP: u64 = 1 << 62;
        if q.is_zero() {
            return 1;
        }
        assert!(q.is_positive() && q < &Rational::one());
        let mut u = LazyUniform::default();
        if self.u_ge_pow(q, 1, &mut u) {
            return 1;
        }
        // exponential search, then bisection
        let mut lo = 1u64; // q^lo > U
        let mut hi = 2u64;
        while !self.u_ge_pow(q, hi, &mut u) {
            lo = hi;
            if hi >= CAP {
                return CAP;
            }
            hi = (hi * 2).min(CAP);
        }
        // invariant: q^lo > U >= q^hi, G in (lo, hi]
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.u_ge_pow(q, mid, &mut u) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Whether the lazily revealed uniform is `>= q^x`, refining either
    /// the uniform or the power bracket until separation. Comparisons are
    /// dyadic throughout: `u` lives on the `2^-u.bits` grid and the power
    /// bracket on the `2^-u.precision` grid.
    fn u_ge_pow(&mut self, q: &Rational, x: u64, u: &mut LazyUniform) -> bool {
        loop {
            let (lo, hi) = pow_bounds_dyadic(q, &BigUint::from(x), u.precision);
            // compare u_lo = u.num / 2^u.bits against hi / 2^precision and
            // u_hi = (u.num + 1) / 2^u.bits against lo / 2^precision
            let (u_shift, p_shift) = if u.bits >= u.precision {
                (0u64, u.bits - u.precision)
            } else {
                (u.precision - u.bits, 0u64)
            };
            let u_lo = &u.num << u_shift;
            if u_lo >= (&hi << p_shift) {
                return true;
            }
            let u_hi = u_lo + (BigUint::one() << u_shift);
            if u_hi <= (&lo << p_shift) {
                return false;
            }
            // refine whichever interval is blunter: bracket width is
            // (hi-lo)/2^precision, the u cell is 2^-bits
            let diff = &hi - &lo;
            let bracket_wider = !diff.is_zero()
                && (u.precision < u.bits
                    || diff >= (BigUint::one() << (u.precision - u.bits)));
            if bracket_wider {
                u.precision *= 2;
            } else {
                u.num = (&u.num << 1) | BigUint::from(u8::from(self.next_bit()));
                u.bits += 1;
            }
        }
    }

    /// Draws from an explicit finite distribution (slow path).
    pub fn sample_index(&mut self, probs: &[Rational]) -> usize {
        debug_assert!(probs.iter().sum::<Rational>() == Rational::one());
        let last = probs.len() - 1;
        // lazy uniform against the cumulative thresholds
        let mut u_num = BigUint::zero();
        let mut k = 0u64;
        loop {
            let scale = BigInt::one() << k;
            let u_lo = Rational::new(BigInt::from(u_num.clone()), scale.clone());
            let u_hi = Rational::new(BigInt::from(&u_num + 1u8), scale);
            let mut cum = Rational::zero();
            for (i, p) in probs.iter().enumerate() {
                if i == last && &u_lo >= &cum {
                    return last;
                }
                let next = &cum + p;
                if &u_lo >= &cum && &u_hi <= &next {
                    return i;
                }
                cum = next;
            }
            u_num = (u_num << 1) | BigUint::from(u8::from(self.next_bit()));
            k += 1;
        }
    }
}

/// A uniform variate revealed bit by bit, together with the working
/// precision for power brackets compared against it.
struct LazyUniform {
    num: BigUint,
    bits: u64,
    precision: u64,
}

impl Default for LazyUniform {
    fn default() -> Self {
        LazyUniform {
            num: BigUint::zero(),
            bits: 0,
            precision: 64,
        }
    }
}

/// Directed-rounding bounds on `base^exp` for `base in (0,1]` as dyadic
/// mantissas: the true power lies in `[lo, hi] / 2^precision`. All
/// arithmetic is fixed point (multiply and shift), never reduced.
fn pow_bounds_dyadic(base: &Rational, exp: &BigUint, precision: u64) -> (BigUint, BigUint) {
    let num = base.numer().magnitude();
    let den = base.denom().magnitude();
    let scale = BigUint::one() << precision;
    // directed-rounding fixed-point image of the base
    let base_lo = (num * &scale) / den;
    let base_hi = (num * &scale + den - 1u8) / den;
    let mut lo = scale.clone();
    let mut hi = scale.clone();
    let nbits = exp.bits();
    for pos in (0..nbits).rev() {
        lo = (&lo * &lo) >> precision;
        hi = ((&hi * &hi) + (&scale - 1u8)) >> precision;
        if exp.bit(pos) {
            lo = (&lo * &base_lo) >> precision;
            hi = ((&hi * &base_hi) + (&scale - 1u8)) >> precision;
        }
        if hi > scale {
            hi = scale.clone();
        }
    }
    (lo, hi)
}

/// Directed-rounding bounds on `base^exp` for `base in (0,1]`: the true
/// power lies in `[lo, hi]`, with each bound held to `precision`
/// fractional bits.
pub fn pow_bounds(base: &Rational, exp: &BigUint, precision: u64) -> (Rational, Rational) {
    let (lo, hi) = pow_bounds_dyadic(base, exp, precision);
    let scale = BigInt::one() << precision;
    (
        Rational::new(BigInt::from(lo), scale.clone()),
        Rational::new(BigInt::from(hi), scale),
    )
}

/// A probability with its leading binary digits precomputed for fast
/// repeated draws; the remainder past the prefix is kept as an exact
/// rational continuation.
#[derive(Debug, Clone)]
pub struct CompiledProb {
    /// 0/1 shortcut.
    certain: Option<bool>,
    words: Vec<u64>,
    nbits: usize,
    tail: Option<Rational>,
}

impl CompiledProb {
    pub fn new(p: &Rational) -> Self {
        Self::with_prefix(p, 128)
    }

    pub fn with_prefix(p: &Rational, prefix_bits: usize) -> Self {
        if p.is_zero() || p.numer().is_negative() {
            return CompiledProb {
                certain: Some(false),
                words: Vec::new(),
                nbits: 0,
                tail: None,
            };
        }
        if p >= &Rational::one() {
            return CompiledProb {
                certain: Some(true),
                words: Vec::new(),
                nbits: 0,
                tail: None,
            };
        }
        let mut words = Vec::new();
        let mut n: BigUint = p.numer().magnitude().clone();
        let q: &BigUint = p.denom().magnitude();
        let mut nbits = 0usize;
        for _ in 0..prefix_bits {
            n <<= 1;
            let digit = &n >= q;
            if digit {
                n -= q;
            }
            if nbits % 64 == 0 {
                words.push(0);
            }
            if digit {
                let w = words.last_mut().unwrap();
                *w |= 1 << (nbits % 64);
            }
            nbits += 1;
            if n.is_zero() {
                // terminating expansion
                return CompiledProb {
                    certain: None,
                    words,
                    nbits,
                    tail: None,
                };
            }
        }
        let tail = Rational::new(BigInt::from(n), p.denom().clone());
        CompiledProb {
            certain: None,
            words,
            nbits,
            tail: Some(tail),
        }
    }

    #[inline]
    fn digit(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};

    #[test]
    fn splitmix_is_stable() {
        let mut rng = SplitMix64::new(0);
        // first outputs of splitmix64(0), a fixed reference
        assert_eq!(rng.next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(rng.next_u64(), 0x6E789E6AA1B965F4);
    }

    #[test]
    fn certain_events_consume_no_bits() {
        let mut bits = FairBits::new(SplitMix64::new(1));
        assert!(!bits.bernoulli(&rat(0)));
        assert!(bits.bernoulli(&rat(1)));
        assert_eq!(bits.consumed(), 0);
    }

    #[test]
    fn bernoulli_frequency_and_bit_cost() {
        let p = ratio(3, 7);
        let mut bits = FairBits::new(SplitMix64::new(0xB17));
        let trials = 100_000u64;
        let mut hits = 0u64;
        for _ in 0..trials {
            if bits.bernoulli(&p) {
                hits += 1;
            }
        }
        // 4-sigma window around 3/7
        let mean = 3.0 / 7.0;
        let sigma = (mean * (1.0 - mean) / trials as f64).sqrt();
        let freq = hits as f64 / trials as f64;
        assert!((freq - mean).abs() < 4.0 * sigma, "freq {freq}");
        // expected 2 bits per draw
        let per_draw = bits.consumed() as f64 / trials as f64;
        assert!(per_draw < 2.1, "bits per draw {per_draw}");
    }

    #[test]
    fn compiled_matches_plain_bernoulli() {
        for p in [ratio(3, 7), ratio(1, 1024), ratio(1000, 1024), ratio(5, 6)] {
            let compiled = CompiledProb::new(&p);
            let mut a = FairBits::new(SplitMix64::new(0xAB));
            let mut b = FairBits::new(SplitMix64::new(0xAB));
            for _ in 0..10_000 {
                assert_eq!(a.bernoulli(&p), b.bernoulli_compiled(&compiled));
            }
            assert_eq!(a.consumed(), b.consumed());
        }
    }

    #[test]
    fn short_prefix_falls_back_to_tail() {
        let p = ratio(3, 7);
        let compiled = CompiledProb::with_prefix(&p, 2);
        let mut a = FairBits::new(SplitMix64::new(0xCD));
        let mut b = FairBits::new(SplitMix64::new(0xCD));
        for _ in 0..10_000 {
            assert_eq!(a.bernoulli(&p), b.bernoulli_compiled(&compiled));
        }
    }

    #[test]
    fn scaled_pow_matches_exact_rational() {
        // small exponent: compare against the explicitly computed rational
        let coef = ratio(1, 16);
        let base = ratio(3, 4);
        let exp = BigUint::from(5u8);
        let exact = &coef * ratio(243, 1024);
        let mut a = FairBits::new(SplitMix64::new(0x5CA1ED));
        let mut b = FairBits::new(SplitMix64::new(0x5CA1ED));
        for _ in 0..20_000 {
            assert_eq!(
                a.bernoulli_scaled_pow(&coef, &base, &exp),
                b.bernoulli(&exact)
            );
        }
    }

    #[test]
    fn scaled_pow_huge_exponent_is_cheap() {
        let coef = ratio(1, 1 << 20);
        let base = ratio(999, 1000);
        let exp = BigUint::from(10u8).pow(30);
        let mut bits = FairBits::new(SplitMix64::new(0xFEED));
        let mut any = false;
        for _ in 0..1_000 {
            any |= bits.bernoulli_scaled_pow(&coef, &base, &exp);
        }
        // base^exp is essentially zero here
        assert!(!any);
        assert!(bits.consumed() < 10_000);
    }

    #[test]
    fn pow_bounds_bracket_truth() {
        let base = ratio(2, 3);
        let exp = BigUint::from(10u8);
        let truth = ratio(1024, 59049);
        let (lo, hi) = pow_bounds(&base, &exp, 80);
        assert!(lo <= truth && truth <= hi);
        assert!(&hi - &lo < ratio(1, 1 << 60));
    }

    #[test]
    fn uniform_below_is_unbiased_enough() {
        let mut bits = FairBits::new(SplitMix64::new(0xD1CE));
        let mut counts = [0u64; 5];
        for _ in 0..50_000 {
            counts[bits.uniform_below(5) as usize] += 1;
        }
        for &c in &counts {
            let dev = (c as f64 - 10_000.0).abs();
            assert!(dev < 4.0 * (10_000.0f64 * 0.8).sqrt(), "count {c}");
        }
    }

    #[test]
    fn sample_index_respects_distribution() {
        let probs = vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let mut bits = FairBits::new(SplitMix64::new(0x1D1CE));
        let mut counts = [0u64; 3];
        for _ in 0..60_000 {
            counts[bits.sample_index(&probs)] += 1;
        }
        let expect = [30_000.0, 20_000.0, 10_000.0];
        for (c, e) in counts.iter().zip(expect) {
            assert!((((*c as f64) - e) / e).abs() < 0.05);
        }
    }

    #[test]
    fn geometric_matches_sequential_bernoulli() {
        // same law as "first success of Bernoulli(p)" with p = 5/16
        let q = ratio(11, 16);
        let p = ratio(5, 16);
        let trials = 40_000u64;
        let mut bits = FairBits::new(SplitMix64::new(0x6E0));
        let mut sum = 0u64;
        let mut ones = 0u64;
        for _ in 0..trials {
            let g = bits.geometric(&q);
            sum += g;
            ones += u64::from(g == 1);
        }
        // E[G] = 16/5 = 3.2; P(G=1) = 5/16
        let mean = sum as f64 / trials as f64;
        assert!((mean - 3.2).abs() < 0.1, "mean {mean}");
        let p1 = ones as f64 / trials as f64;
        assert!((p1 - 0.3125).abs() < 0.02, "p1 {p1}");
        let _ = p;
    }

    #[test]
    fn geometric_certain_success_is_free() {
        let mut bits = FairBits::new(SplitMix64::new(9));
        assert_eq!(bits.geometric(&rat(0)), 1);
        assert_eq!(bits.consumed(), 0);
    }

    #[test]
    fn derived_streams_differ() {
        let mut a = derive_stream(7, 0, 0);
        let mut b = derive_stream(7, 1, 0);
        let mut c = derive_stream(7, 0, 1);
        let x = a.next_u64();
        assert_ne!(x, b.next_u64());
        assert_ne!(x, c.next_u64());
    }
}
