//! Canonical normal forms for `W_n Omega^0` and `W_n Omega^1` over
//! `F_p[t, 1/t]` and the operator calculus on them.
//!
//! Every 0-form is a unique finite sum
//! `sum_i b_i [t]^i + sum_{s,j} V^s(c_{s,j} [t]^j)` with `b_i in Z/p^n`,
//! `c_{s,j} in Z/p^(n-s)`, `1 <= s <= n-1`, `p` not dividing `j`; a 1-form is
//! `sum_i a_i [t]^i dlog t + sum_{s,j} dV^s(c_{s,j} [t]^j)` with the same key
//! discipline. All arithmetic is exact; nothing is ever truncated at the
//! element level.

use crate::error::{Error, Result};
use crate::scalar::{self, PrimeContext};
use crate::witt::{self, FpLaurentRing, Laurent, WittOps, WittVector};
use std::collections::BTreeMap;
use std::fmt;

/// `sum_i head[i] * [t]^i + sum_{(s,j)} V^s(deep[(s,j)] * [t]^j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm0 {
    pub ctx: PrimeContext,
    pub head: BTreeMap<i64, u64>,
    pub deep: BTreeMap<(u32, i64), u64>,
}

/// `sum_i dlog[i] * [t]^i dlog t + sum_{(s,j)} dV^s(dv[(s,j)] * [t]^j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm1 {
    pub ctx: PrimeContext,
    pub dlog: BTreeMap<i64, u64>,
    pub dv: BTreeMap<(u32, i64), u64>,
}

/// A form of degree 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Form {
    Zero(NormalForm0),
    One(NormalForm1),
}

fn add_key<K: Ord>(map: &mut BTreeMap<K, u64>, k: K, v: u64, m: u64) {
    let v = v % m;
    if v == 0 {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = scalar::add_mod(*e.get(), v, m);
            if s == 0 {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn mul_exp(p: u64, s: u32, i: i64) -> i64 {
    (p.pow(s) as i64).checked_mul(i).expect("exponent overflow")
}

impl NormalForm0 {
    pub fn zero(ctx: PrimeContext) -> Self {
        NormalForm0 { ctx, head: BTreeMap::new(), deep: BTreeMap::new() }
    }

    pub fn one(ctx: PrimeContext) -> Self {
        let mut nf = Self::zero(ctx);
        nf.add_head(0, 1);
        nf
    }

    /// Teichmueller of the monomial `c * t^i`.
    pub fn teich_monomial(ctx: PrimeContext, c: u64, i: i64) -> Self {
        let mut nf = Self::zero(ctx);
        nf.add_head(i, scalar::teich_scalar(&ctx, c));
        nf
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.deep.is_empty()
    }

    fn head_mod(&self) -> u64 {
        self.ctx.modulus()
    }

    fn deep_mod(&self, s: u32) -> u64 {
        self.ctx.pw(self.ctx.n() - s)
    }

    pub fn add_head(&mut self, i: i64, v: u64) {
        let m = self.head_mod();
        add_key(&mut self.head, i, v, m);
    }

    /// Add `V^s(c * [t]^j)`, renormalizing until `p` does not divide `j`.
    pub fn push_deep(&mut self, s: u32, j: i64, c: u64) {
        let p = self.ctx.p();
        let c = c % self.deep_mod(s);
        if c == 0 {
            return;
        }
        if s == 0 {
            self.add_head(j, c);
        } else if j == 0 {
            // V^s of a scalar is the scalar p^s * c.
            self.add_head(0, (self.ctx.pw(s) as u128 * c as u128 % self.head_mod() as u128) as u64);
        } else if j % p as i64 == 0 {
            // V^s(c [t]^(p m)) = V^(s-1)(V(c) [t]^m).
            self.push_deep(s - 1, j / p as i64, (c as u128 * p as u128 % self.deep_mod(s - 1) as u128) as u64);
        } else {
            let m = self.deep_mod(s);
            add_key(&mut self.deep, (s, j), c, m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "prime context mismatch");
        let mut out = self.clone();
        for (&i, &b) in &other.head {
            out.add_head(i, b);
        }
        for (&(s, j), &c) in &other.deep {
            let m = out.deep_mod(s);
            add_key(&mut out.deep, (s, j), c, m);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for (&i, &b) in &self.head {
            out.head.insert(i, scalar::neg_mod(b, self.head_mod()));
        }
        for (&(s, j), &c) in &self.deep {
            out.deep.insert((s, j), scalar::neg_mod(c, self.deep_mod(s)));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplication by an integer (the `Z`-module structure).
    pub fn int_mul(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ctx);
        for (&i, &b) in &self.head {
            out.add_head(i, scalar::mul_mod(scalar::int_mod(k, self.head_mod()), b, self.head_mod()));
        }
        for (&(s, j), &c) in &self.deep {
            let m = self.deep_mod(s);
            add_key(&mut out.deep, (s, j), scalar::mul_mod(scalar::int_mod(k, m), c, m), m);
        }
        out
    }

    /// Frobenius `W_(n+1) -> W_n` in coefficient transport form.
    pub fn f(&self) -> Result<Self> {
        let ctx = self.ctx.lower()?;
        let p = self.ctx.p();
        let mut out = Self::zero(ctx);
        for (&i, &b) in &self.head {
            out.add_head(i.checked_mul(p as i64).expect("exponent overflow"), b % ctx.modulus());
        }
        for (&(s, j), &c) in &self.deep {
            // F(V^s(c [t]^j)) = V^(s-1)((p c) [t]^j).
            let m = ctx.pw(ctx.n() - (s - 1));
            out.push_deep(s - 1, j, (c as u128 * p as u128 % m as u128) as u64);
        }
        Ok(out)
    }

    /// Verschiebung `W_n -> W_(n+1)`.
    pub fn v(&self) -> Result<Self> {
        let ctx = self.ctx.raise()?;
        let mut out = Self::zero(ctx);
        for (&i, &b) in &self.head {
            out.push_deep(1, i, b);
        }
        for (&(s, j), &c) in &self.deep {
            out.push_deep(s + 1, j, c);
        }
        Ok(out)
    }

    /// Restriction `W_(n+1) -> W_n`.
    pub fn r(&self) -> Result<Self> {
        let ctx = self.ctx.lower()?;
        let mut out = Self::zero(ctx);
        for (&i, &b) in &self.head {
            out.add_head(i, b % ctx.modulus());
        }
        for (&(s, j), &c) in &self.deep {
            if s < ctx.n() {
                add_key(&mut out.deep, (s, j), c % ctx.pw(ctx.n() - s), ctx.pw(ctx.n() - s));
            }
        }
        Ok(out)
    }

    /// `p`-underline: lift to one level up and multiply by `p`.
    pub fn pline(&self) -> Result<Self> {
        let ctx = self.ctx.raise()?;
        let p = self.ctx.p();
        let mut out = Self::zero(ctx);
        for (&i, &b) in &self.head {
            out.add_head(i, b * p);
        }
        for (&(s, j), &c) in &self.deep {
            add_key(&mut out.deep, (s, j), c * p, ctx.pw(ctx.n() - s));
        }
        Ok(out)
    }

    /// The differential `d: W_n Omega^0 -> W_n Omega^1`.
    pub fn d(&self) -> NormalForm1 {
        let mut out = NormalForm1::zero(self.ctx);
        let m = self.head_mod();
        for (&i, &b) in &self.head {
            out.add_dlog(i, scalar::mul_mod(scalar::int_mod(i, m), b, m));
        }
        for (&(s, j), &c) in &self.deep {
            add_key(&mut out.dv, (s, j), c, self.deep_mod(s));
        }
        out
    }

    /// Product of 0-forms.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "prime context mismatch");
        let p = self.ctx.p();
        let mut out = Self::zero(self.ctx);
        for (&i, &b) in &self.head {
            for (&i2, &b2) in &other.head {
                out.add_head(i.checked_add(i2).expect("exponent overflow"), scalar::mul_mod(b, b2, self.head_mod()));
            }
            for (&(s, j), &c) in &other.deep {
                // b[t]^i * V^s(c[t]^j) = V^s((F^s b) c [t]^(p^s i + j)).
                let m = self.deep_mod(s);
                let e = mul_exp(p, s, i).checked_add(j).expect("exponent overflow");
                out.push_deep(s, e, scalar::mul_mod(b % m, c, m));
            }
        }
        for (&(s, j), &c) in &self.deep {
            for (&i2, &b2) in &other.head {
                let m = self.deep_mod(s);
                let e = mul_exp(p, s, i2).checked_add(j).expect("exponent overflow");
                out.push_deep(s, e, scalar::mul_mod(b2 % m, c, m));
            }
            for (&(s2, j2), &c2) in &other.deep {
                // V^a(x) V^b(y) = p^a V^b(F^(b-a)(x) y) for a <= b.
                let (a, ja, ca, b, jb, cb) =
                    if s <= s2 { (s, j, c, s2, j2, c2) } else { (s2, j2, c2, s, j, c) };
                let m = self.deep_mod(b);
                let e = mul_exp(p, b - a, ja).checked_add(jb).expect("exponent overflow");
                let coeff = (ca as u128 % m as u128) * (cb as u128 % m as u128) % m as u128;
                let coeff = coeff * (self.ctx.pw(a) as u128 % m as u128) % m as u128;
                out.push_deep(b, e, coeff as u64);
            }
        }
        out
    }

    /// Module action of 0-forms on 1-forms.
    pub fn mul_form(&self, w: &NormalForm1) -> NormalForm1 {
        assert_eq!(self.ctx, w.ctx, "prime context mismatch");
        let p = self.ctx.p();
        let n = self.ctx.n();
        let mut out = NormalForm1::zero(self.ctx);
        let hm = self.head_mod();
        for (&i, &b) in &self.head {
            for (&i2, &a2) in &w.dlog {
                out.add_dlog(i.checked_add(i2).expect("exponent overflow"), scalar::mul_mod(b, a2, hm));
            }
            for (&(s, j), &c) in &w.dv {
                // b[t]^i * dV^s(c[t]^j) = (b c j / e) dV^s([t]^e), e = p^s i + j.
                let m = self.ctx.pw(n - s);
                let e = mul_exp(p, s, i).checked_add(j).expect("exponent overflow");
                let coeff = scalar::mul_mod(
                    scalar::mul_mod(b % m, c, m),
                    scalar::mul_mod(scalar::int_mod(j, m), scalar::inv_mod(scalar::int_mod(e, m), m), m),
                    m,
                );
                add_key(&mut out.dv, (s, e), coeff, m);
            }
        }
        for (&(s, j), &c) in &self.deep {
            for (&i2, &a2) in &w.dlog {
                // V^s(c[t]^j) * a[t]^i dlog t = V^s(c a [t]^(j + p^s i) dlog t).
                let m = self.ctx.pw(n - s);
                let e = j.checked_add(mul_exp(p, s, i2)).expect("exponent overflow");
                out.push_vdlog(s, e, scalar::mul_mod(c, a2 % m, m));
            }
            for (&(s2, j2), &c2) in &w.dv {
                if s2 >= s {
                    // alpha dV^(s2)(x) = dV^(s2)(F^(s2)(alpha) x) - V^(s2)(F^(s2)(d alpha) x).
                    let m = self.ctx.pw(n - s2);
                    let e = mul_exp(p, s2 - s, j).checked_add(j2).expect("exponent overflow");
                    let gamma = scalar::mul_mod(
                        scalar::mul_mod(self.ctx.pw(s) % m, c % m, m),
                        c2,
                        m,
                    );
                    let mut tmp = NormalForm0::zero(self.ctx);
                    tmp.push_deep(s2, e, gamma);
                    out = out.add(&tmp.d());
                    let t2 = scalar::mul_mod(
                        scalar::mul_mod(c % m, scalar::int_mod(j, m), m),
                        c2,
                        m,
                    );
                    out.push_vdlog(s2, e, scalar::neg_mod(t2, m));
                } else {
                    // s2 < s: single dv key (s, j + p^(s-s2) j2) with
                    // coefficient p^s c c2 j2 / e.
                    let m = self.ctx.pw(n - s);
                    let e = j.checked_add(mul_exp(p, s - s2, j2)).expect("exponent overflow");
                    let coeff = scalar::mul_mod(
                        scalar::mul_mod(self.ctx.pw(s) % m, scalar::mul_mod(c, c2 % m, m), m),
                        scalar::mul_mod(
                            scalar::int_mod(j2, m),
                            scalar::inv_mod(scalar::int_mod(e, m), m),
                            m,
                        ),
                        m,
                    );
                    add_key(&mut out.dv, (s, e), coeff, m);
                }
            }
        }
        out
    }

    /// Cartier operator on 0-forms: solves `F(tau) = self` and returns
    /// `R(tau)`; defined on the image of `F` (`Z_n` for `q = 0`).
    pub fn cartier(&self) -> Result<Self> {
        let p = self.ctx.p();
        let n = self.ctx.n();
        let mut out = Self::zero(self.ctx);
        for (&i, &b) in &self.head {
            if i % p as i64 == 0 {
                out.add_head(i / p as i64, b);
            } else {
                if b % p != 0 {
                    return Err(Error::NotInFImage);
                }
                if n >= 2 {
                    add_key(&mut out.deep, (1, i), (b / p) % self.ctx.pw(n - 1), self.ctx.pw(n - 1));
                }
            }
        }
        for (&(s, j), &c) in &self.deep {
            if c % p != 0 {
                return Err(Error::NotInFImage);
            }
            if s < n - 1 {
                add_key(&mut out.deep, (s + 1, j), (c / p) % self.ctx.pw(n - s - 1), self.ctx.pw(n - s - 1));
            }
        }
        Ok(out)
    }

    /// Inverse Cartier: `F` of the canonical lift. For 0-forms this is the
    /// honest Witt-vector Frobenius (no `dV^(n-1)` ambiguity in degree 0).
    pub fn inv_cartier(&self) -> Self {
        let p = self.ctx.p();
        let mut out = Self::zero(self.ctx);
        for (&i, &b) in &self.head {
            out.add_head(i.checked_mul(p as i64).expect("exponent overflow"), b);
        }
        for (&(s, j), &c) in &self.deep {
            out.push_deep(s - 1, j, (c as u128 * p as u128 % self.deep_mod(s - 1) as u128) as u64);
        }
        out
    }

    /// Raw Witt coordinates over `F_p[t, 1/t]`.
    pub fn recompose(&self) -> WittVector<Laurent<u64>> {
        let ring = FpLaurentRing { p: self.ctx.p() };
        let ops = WittOps::new(&ring, self.ctx.p());
        let n = self.ctx.n();
        let mut acc = ops.zero(n);
        for (&i, &b) in &self.head {
            let sw = witt::scalar_witt(&ring, &self.ctx, b);
            let t = ops.teich(&ring.monomial(1, i), n);
            acc = ops.add(&acc, &ops.mul(&sw, &t).unwrap()).unwrap();
        }
        for (&(s, j), &c) in &self.deep {
            let sub = self.ctx.at_length(n - s).unwrap();
            let sw = witt::scalar_witt(&ring, &sub, c);
            let t = ops.teich(&ring.monomial(1, j), n - s);
            let mut inner = ops.mul(&sw, &t).unwrap();
            for _ in 0..s {
                inner = ops.v(&inner);
            }
            acc = ops.add(&acc, &inner).unwrap();
        }
        acc
    }

    /// Peel-V decomposition of raw Witt coordinates into normal form.
    pub fn decompose(ctx: PrimeContext, w: &WittVector<Laurent<u64>>) -> Self {
        assert_eq!(w.len(), ctx.n());
        let ring = FpLaurentRing { p: ctx.p() };
        let ops = WittOps::new(&ring, ctx.p());
        let mut nf = Self::zero(ctx);
        let a0 = &w.coords[0];
        for (&k, &alpha) in &a0.coeffs {
            nf.add_head(k, scalar::teich_scalar(&ctx, alpha));
        }
        if ctx.n() == 1 {
            return nf;
        }
        // Subtract the Teichmueller heads; the difference has first
        // coordinate zero, i.e. lies in V(W_(n-1)).
        let mut raw_head = ops.zero(ctx.n());
        for (&k, &alpha) in &a0.coeffs {
            raw_head = ops.add(&raw_head, &ops.teich(&ring.monomial(alpha, k), ctx.n())).unwrap();
        }
        let rest = ops.sub(w, &raw_head).unwrap();
        debug_assert!(rest.coords[0].is_zero());
        let u = WittVector { coords: rest.coords[1..].to_vec() };
        let inner = Self::decompose(ctx.lower().unwrap(), &u);
        nf.add(&inner.v().unwrap())
    }

    pub fn support_profile(&self) -> SupportProfile {
        SupportProfile::of_keys(
            &self.ctx,
            self.head.keys().copied(),
            self.deep.keys().copied(),
        )
    }

    /// All keys lie in the regular cone (`i >= 0`, `j >= 1`).
    pub fn is_regular(&self) -> bool {
        self.head.keys().all(|&i| i >= 0) && self.deep.keys().all(|&(_, j)| j >= 1)
    }

    pub fn min_key_exp(&self) -> Option<i64> {
        self.head
            .keys()
            .copied()
            .chain(self.deep.keys().map(|&(_, j)| j))
            .min()
    }
}

impl NormalForm1 {
    pub fn zero(ctx: PrimeContext) -> Self {
        NormalForm1 { ctx, dlog: BTreeMap::new(), dv: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.dlog.is_empty() && self.dv.is_empty()
    }

    fn head_mod(&self) -> u64 {
        self.ctx.modulus()
    }

    fn dv_mod(&self, s: u32) -> u64 {
        self.ctx.pw(self.ctx.n() - s)
    }

    pub fn add_dlog(&mut self, i: i64, v: u64) {
        let m = self.head_mod();
        add_key(&mut self.dlog, i, v, m);
    }

    /// Add `dV^s(c [t]^j)` in normalized position.
    pub fn push_dv(&mut self, s: u32, j: i64, c: u64) {
        let p = self.ctx.p();
        let c = c % self.dv_mod(s);
        if c == 0 || j == 0 {
            return;
        }
        if s == 0 {
            let m = self.head_mod();
            self.add_dlog(j, scalar::mul_mod(scalar::int_mod(j, m), c, m));
        } else if j % p as i64 == 0 {
            self.push_dv(s - 1, j / p as i64, (c as u128 * p as u128 % self.dv_mod(s - 1) as u128) as u64);
        } else {
            let m = self.dv_mod(s);
            add_key(&mut self.dv, (s, j), c, m);
        }
    }

    /// Add `V^s(x [t]^e dlog t)`, i.e. `(p^s x / e) dV^s([t]^e)` after
    /// renormalization.
    pub fn push_vdlog(&mut self, s: u32, e: i64, x: u64) {
        let p = self.ctx.p();
        let x = x % self.dv_mod(s);
        if x == 0 {
            return;
        }
        if s == 0 {
            self.add_dlog(e, x);
        } else if e == 0 {
            self.add_dlog(0, (self.ctx.pw(s) as u128 * x as u128 % self.head_mod() as u128) as u64);
        } else if e % p as i64 == 0 {
            self.push_vdlog(s - 1, e / p as i64, (x as u128 * p as u128 % self.dv_mod(s - 1) as u128) as u64);
        } else {
            let m = self.dv_mod(s);
            let coeff = scalar::mul_mod(
                scalar::mul_mod(self.ctx.pw(s) % m, x, m),
                scalar::inv_mod(scalar::int_mod(e, m), m),
                m,
            );
            add_key(&mut self.dv, (s, e), coeff, m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "prime context mismatch");
        let mut out = self.clone();
        for (&i, &a) in &other.dlog {
            out.add_dlog(i, a);
        }
        for (&(s, j), &c) in &other.dv {
            let m = out.dv_mod(s);
            add_key(&mut out.dv, (s, j), c, m);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for (&i, &a) in &self.dlog {
            out.dlog.insert(i, scalar::neg_mod(a, self.head_mod()));
        }
        for (&(s, j), &c) in &self.dv {
            out.dv.insert((s, j), scalar::neg_mod(c, self.dv_mod(s)));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn int_mul(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ctx);
        let hm = self.head_mod();
        for (&i, &a) in &self.dlog {
            out.add_dlog(i, scalar::mul_mod(scalar::int_mod(k, hm), a, hm));
        }
        for (&(s, j), &c) in &self.dv {
            let m = self.dv_mod(s);
            add_key(&mut out.dv, (s, j), scalar::mul_mod(scalar::int_mod(k, m), c, m), m);
        }
        out
    }

    pub fn f(&self) -> Result<Self> {
        let ctx = self.ctx.lower()?;
        let p = self.ctx.p();
        let mut out = Self::zero(ctx);
        for (&i, &a) in &self.dlog {
            out.add_dlog(i.checked_mul(p as i64).expect("exponent overflow"), a % ctx.modulus());
        }
        for (&(s, j), &c) in &self.dv {
            // F dV^s = dV^(s-1); at s = 1 this is d: dV(c[t]^j) -> j c [t]^j dlog t.
            out.push_dv(s - 1, j, c % ctx.pw(ctx.n().saturating_sub(s - 1)));
        }
        Ok(out)
    }

    pub fn v(&self) -> Result<Self> {
        let ctx = self.ctx.raise()?;
        let p = self.ctx.p();
        let mut out = Self::zero(ctx);
        for (&i, &a) in &self.dlog {
            out.push_vdlog(1, i, a % ctx.pw(ctx.n() - 1));
        }
        for (&(s, j), &c) in &self.dv {
            // V dV^s = p dV^(s+1).
            let m = ctx.pw(ctx.n() - (s + 1));
            add_key(&mut out.dv, (s + 1, j), (c as u128 * p as u128 % m as u128) as u64, m);
        }
        Ok(out)
    }

    pub fn r(&self) -> Result<Self> {
        let ctx = self.ctx.lower()?;
        let mut out = Self::zero(ctx);
        for (&i, &a) in &self.dlog {
            out.add_dlog(i, a % ctx.modulus());
        }
        for (&(s, j), &c) in &self.dv {
            if s < ctx.n() {
                add_key(&mut out.dv, (s, j), c % ctx.pw(ctx.n() - s), ctx.pw(ctx.n() - s));
            }
        }
        Ok(out)
    }

    pub fn pline(&self) -> Result<Self> {
        let ctx = self.ctx.raise()?;
        let p = self.ctx.p();
        let mut out = Self::zero(ctx);
        for (&i, &a) in &self.dlog {
            out.add_dlog(i, a * p);
        }
        for (&(s, j), &c) in &self.dv {
            add_key(&mut out.dv, (s, j), c * p, ctx.pw(ctx.n() - s));
        }
        Ok(out)
    }

    /// The residue: the `dlog t` coefficient at exponent 0.
    pub fn residue(&self) -> u64 {
        self.dlog.get(&0).copied().unwrap_or(0)
    }

    /// `dlog` of the monomial unit `c * t^i`; `c` must be nonzero in `F_p`.
    pub fn dlog_monomial(ctx: PrimeContext, c: u64, i: i64) -> Result<Self> {
        if c.is_multiple_of(ctx.p()) {
            return Err(Error::BadContext("dlog of 0".into()));
        }
        let mut out = Self::zero(ctx);
        out.add_dlog(0, scalar::int_mod(i, ctx.modulus()));
        Ok(out)
    }

    /// Cartier operator on 1-forms; total over the Laurent ring.
    pub fn cartier(&self) -> Self {
        let p = self.ctx.p();
        let n = self.ctx.n();
        let mut out = Self::zero(self.ctx);
        for (&i, &a) in &self.dlog {
            if i % p as i64 == 0 {
                out.add_dlog(i / p as i64, a);
            } else if n >= 2 {
                let m = self.ctx.pw(n - 1);
                add_key(
                    &mut out.dv,
                    (1, i),
                    scalar::mul_mod(a % m, scalar::inv_mod(scalar::int_mod(i, m), m), m),
                    m,
                );
            }
        }
        for (&(s, j), &c) in &self.dv {
            if s < n - 1 {
                add_key(&mut out.dv, (s + 1, j), c % self.ctx.pw(n - s - 1), self.ctx.pw(n - s - 1));
            }
        }
        out
    }

    /// Inverse Cartier: a representative of `F(lift)`, well defined modulo
    /// `dV^(n-1) Omega^0`.
    pub fn inv_cartier(&self) -> Self {
        let p = self.ctx.p();
        let mut out = Self::zero(self.ctx);
        for (&i, &a) in &self.dlog {
            out.add_dlog(i.checked_mul(p as i64).expect("exponent overflow"), a);
        }
        for (&(s, j), &c) in &self.dv {
            out.push_dv(s - 1, j, c);
        }
        out
    }

    pub fn support_profile(&self) -> SupportProfile {
        SupportProfile::of_keys(&self.ctx, self.dlog.keys().copied(), self.dv.keys().copied())
    }

    /// Window generators of `dV^(n-1)(Omega^0)`, the ambiguity of the
    /// inverse Cartier representative on 1-forms.
    pub fn dv_ambiguity_basis(ctx: PrimeContext, min_exp: i64, max_exp: i64) -> Vec<NormalForm1> {
        let mut out = Vec::new();
        if ctx.n() == 1 {
            // dV^0 = d on level-1 functions.
            for e in min_exp..=max_exp {
                let x = NormalForm0::teich_monomial(ctx, 1, e);
                let dx = x.d();
                if !dx.is_zero() {
                    out.push(dx);
                }
            }
            return out;
        }
        for e in min_exp..=max_exp {
            let mut w = NormalForm1::zero(ctx);
            w.push_dv(ctx.n() - 1, e, 1);
            if !w.is_zero() {
                out.push(w);
            }
        }
        out
    }

    /// Regular support: `i >= 1` on the `dlog` part, `j >= 1` on `dv`.
    pub fn is_regular(&self) -> bool {
        self.dlog.keys().all(|&i| i >= 1) && self.dv.keys().all(|&(_, j)| j >= 1)
    }

    /// Log-regular support: `i >= 0` on the `dlog` part, `j >= 1` on `dv`.
    pub fn is_log_regular(&self) -> bool {
        self.dlog.keys().all(|&i| i >= 0) && self.dv.keys().all(|&(_, j)| j >= 1)
    }

    pub fn min_key_exp(&self) -> Option<i64> {
        self.dlog
            .keys()
            .copied()
            .chain(self.dv.keys().map(|&(_, j)| j))
            .min()
    }
}

/// Exponent ranges of a normal form, with the pole order read off the keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportProfile {
    /// Range of head/dlog exponents, if any.
    pub head_range: Option<(i64, i64)>,
    /// Per-depth `(s, min_j, max_j)` of the deep/dv parts.
    pub deep_ranges: Vec<(u32, i64, i64)>,
    /// `max over keys of p^(n-1-s) * max(0, -exponent)`.
    pub pole_order: u64,
}

impl SupportProfile {
    fn of_keys(
        ctx: &PrimeContext,
        heads: impl Iterator<Item = i64>,
        deeps: impl Iterator<Item = (u32, i64)>,
    ) -> Self {
        let mut head_range: Option<(i64, i64)> = None;
        let mut per_s: BTreeMap<u32, (i64, i64)> = BTreeMap::new();
        let mut pole: u64 = 0;
        for i in heads {
            head_range = Some(match head_range {
                None => (i, i),
                Some((lo, hi)) => (lo.min(i), hi.max(i)),
            });
            if i < 0 {
                pole = pole.max(ctx.pw(ctx.n() - 1) * (-i) as u64);
            }
        }
        for (s, j) in deeps {
            let e = per_s.entry(s).or_insert((j, j));
            e.0 = e.0.min(j);
            e.1 = e.1.max(j);
            if j < 0 {
                pole = pole.max(ctx.pw(ctx.n() - 1 - s) * (-j) as u64);
            }
        }
        SupportProfile {
            head_range,
            deep_ranges: per_s.into_iter().map(|(s, (lo, hi))| (s, lo, hi)).collect(),
            pole_order: pole,
        }
    }
}

impl Form {
    pub fn ctx(&self) -> PrimeContext {
        match self {
            Form::Zero(x) => x.ctx,
            Form::One(x) => x.ctx,
        }
    }

    pub fn degree(&self) -> u8 {
        match self {
            Form::Zero(_) => 0,
            Form::One(_) => 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Form::Zero(x) => x.is_zero(),
            Form::One(x) => x.is_zero(),
        }
    }

    pub fn min_key_exp(&self) -> Option<i64> {
        match self {
            Form::Zero(x) => x.min_key_exp(),
            Form::One(x) => x.min_key_exp(),
        }
    }

    pub fn int_mul(&self, k: i64) -> Form {
        match self {
            Form::Zero(x) => Form::Zero(x.int_mul(k)),
            Form::One(x) => Form::One(x.int_mul(k)),
        }
    }

    pub fn is_regular(&self) -> bool {
        match self {
            Form::Zero(x) => x.is_regular(),
            Form::One(x) => x.is_regular(),
        }
    }
}

impl fmt::Display for NormalForm0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, &b) in &self.head {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{b}*T(1,{i})")?;
        }
        for (&(s, j), &c) in &self.deep {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*V^{s}(T(1,{j}))")?;
        }
        Ok(())
    }
}

impl fmt::Display for NormalForm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, &a) in &self.dlog {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{a}*dlogt")?;
            } else {
                write!(f, "{a}*T(1,{i})*dlogt")?;
            }
        }
        for (&(s, j), &c) in &self.dv {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*dV^{s}(T(1,{j}))")?;
        }
        Ok(())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Zero(x) => x.fmt(f),
            Form::One(x) => x.fmt(f),
        }
    }
}
