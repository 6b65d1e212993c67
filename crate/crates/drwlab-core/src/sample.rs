//! Deterministic sampling of Laurent polynomials, Witt vectors, and normal
//! forms for the property suites. SplitMix64 keeps runs reproducible across
//! platforms without external crates.

use crate::forms::{NormalForm0, NormalForm1};
use crate::scalar::PrimeContext;
use crate::witt::{FpLaurentRing, Laurent, WittVector};

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Sparse Laurent polynomial over `F_p` with up to `terms` monomials and
    /// exponents in `[lo, hi]`.
    pub fn laurent(&mut self, p: u64, terms: usize, lo: i64, hi: i64) -> Laurent<u64> {
        let ring = FpLaurentRing { p };
        let mut out = Laurent::zero();
        let k = self.below(terms as u64 + 1) as usize;
        for _ in 0..k {
            let e = self.range_i64(lo, hi);
            let c = self.below(p);
            let t = ring.monomial(c, e);
            out = crate::witt::Ring::add(&ring, &out, &t);
        }
        out
    }

    pub fn witt_vector(&mut self, ctx: &PrimeContext, terms: usize, lo: i64, hi: i64) -> WittVector<Laurent<u64>> {
        let coords = (0..ctx.n()).map(|_| self.laurent(ctx.p(), terms, lo, hi)).collect();
        WittVector { coords }
    }

    /// Normal 0-form with support inside `[lo, hi]`.
    pub fn nf0(&mut self, ctx: &PrimeContext, terms: usize, lo: i64, hi: i64) -> NormalForm0 {
        let mut out = NormalForm0::zero(*ctx);
        for _ in 0..self.below(terms as u64 + 1) {
            let i = self.range_i64(lo, hi);
            out.add_head(i, self.below(ctx.modulus()));
        }
        for s in 1..ctx.n() {
            for _ in 0..self.below(terms as u64 + 1) {
                let j = self.range_i64(lo, hi);
                out.push_deep(s, j, self.below(ctx.pw(ctx.n() - s)));
            }
        }
        out
    }

    /// Normal 1-form with support inside `[lo, hi]`.
    pub fn nf1(&mut self, ctx: &PrimeContext, terms: usize, lo: i64, hi: i64) -> NormalForm1 {
        let mut out = NormalForm1::zero(*ctx);
        for _ in 0..self.below(terms as u64 + 1) {
            let i = self.range_i64(lo, hi);
            out.add_dlog(i, self.below(ctx.modulus()));
        }
        for s in 1..ctx.n() {
            for _ in 0..self.below(terms as u64 + 1) {
                let j = self.range_i64(lo, hi);
                out.push_dv(s, j, self.below(ctx.pw(ctx.n() - s)));
            }
        }
        out
    }
}
