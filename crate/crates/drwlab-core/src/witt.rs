//! Universal Witt-vector arithmetic.
//!
//! Addition, multiplication, negation, and Frobenius of `p`-typical Witt
//! vectors are given by integer polynomials determined by the ghost
//! identities. The polynomials are built once per `(p, level)` by symbolic
//! ghost inversion over the integers and cached process-wide; the ghost map
//! over a torsion-free coefficient ring doubles as the independent oracle for
//! all of the arithmetic.

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::scalar::{self, PrimeContext};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

/// Ring object presenting a commutative coefficient ring.
#[allow(clippy::wrong_self_convention)]
pub trait Ring {
    type Elem: Clone + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i128(&self, c: i128) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

/// Sparse Laurent polynomials with coefficients of type `C`; no zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent<C> {
    pub coeffs: BTreeMap<i64, C>,
}

impl<C> Laurent<C> {
    pub fn zero() -> Self {
        Laurent { coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation: the minimal exponent with nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }
}

/// `F_p[t, 1/t]` with canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpLaurentRing {
    pub p: u64,
}

impl FpLaurentRing {
    pub fn monomial(&self, c: u64, e: i64) -> Laurent<u64> {
        let mut out = Laurent::zero();
        if !c.is_multiple_of(self.p) {
            out.coeffs.insert(e, c % self.p);
        }
        out
    }
}

impl Ring for FpLaurentRing {
    type Elem = Laurent<u64>;

    fn zero(&self) -> Laurent<u64> {
        Laurent::zero()
    }

    fn one(&self) -> Laurent<u64> {
        self.monomial(1, 0)
    }

    fn from_i128(&self, c: i128) -> Laurent<u64> {
        self.monomial(scalar::int128_mod(c, self.p), 0)
    }

    fn add(&self, a: &Laurent<u64>, b: &Laurent<u64>) -> Laurent<u64> {
        let mut out = a.clone();
        for (&e, &c) in &b.coeffs {
            let v = (out.coeffs.remove(&e).unwrap_or(0) + c) % self.p;
            if v != 0 {
                out.coeffs.insert(e, v);
            }
        }
        out
    }

    fn neg(&self, a: &Laurent<u64>) -> Laurent<u64> {
        let mut out = Laurent::zero();
        for (&e, &c) in &a.coeffs {
            out.coeffs.insert(e, self.p - c);
        }
        out
    }

    fn mul(&self, a: &Laurent<u64>, b: &Laurent<u64>) -> Laurent<u64> {
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        for (&ea, &ca) in &a.coeffs {
            for (&eb, &cb) in &b.coeffs {
                let e = ea.checked_add(eb).expect("exponent overflow");
                let v = (acc.remove(&e).unwrap_or(0) + ca * cb % self.p) % self.p;
                if v != 0 {
                    acc.insert(e, v);
                }
            }
        }
        Laurent { coeffs: acc }
    }
}

/// `Z[t, 1/t]`, the torsion-free lift used by the ghost oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntLaurentRing;

impl Ring for IntLaurentRing {
    type Elem = Laurent<i128>;

    fn zero(&self) -> Laurent<i128> {
        Laurent::zero()
    }

    fn one(&self) -> Laurent<i128> {
        let mut out = Laurent::zero();
        out.coeffs.insert(0, 1);
        out
    }

    fn from_i128(&self, c: i128) -> Laurent<i128> {
        let mut out = Laurent::zero();
        if c != 0 {
            out.coeffs.insert(0, c);
        }
        out
    }

    fn add(&self, a: &Laurent<i128>, b: &Laurent<i128>) -> Laurent<i128> {
        let mut out = a.clone();
        for (&e, &c) in &b.coeffs {
            let v = out.coeffs.remove(&e).unwrap_or(0).checked_add(c).expect("coefficient overflow");
            if v != 0 {
                out.coeffs.insert(e, v);
            }
        }
        out
    }

    fn neg(&self, a: &Laurent<i128>) -> Laurent<i128> {
        Laurent { coeffs: a.coeffs.iter().map(|(&e, &c)| (e, -c)).collect() }
    }

    fn mul(&self, a: &Laurent<i128>, b: &Laurent<i128>) -> Laurent<i128> {
        let mut acc: BTreeMap<i64, i128> = BTreeMap::new();
        for (&ea, &ca) in &a.coeffs {
            for (&eb, &cb) in &b.coeffs {
                let e = ea.checked_add(eb).expect("exponent overflow");
                let t = ca.checked_mul(cb).expect("coefficient overflow");
                let v = acc.remove(&e).unwrap_or(0).checked_add(t).expect("coefficient overflow");
                if v != 0 {
                    acc.insert(e, v);
                }
            }
        }
        Laurent { coeffs: acc }
    }
}

/// `Z/p^N[t, 1/t]` for a large auxiliary precision `N`: the ghost oracle for
/// truncation lengths whose integral Witt coordinates overflow `i128`. Ghost
/// identities are checked mod `p^N`, which pins every coordinate mod
/// `p^(N-i)` and in particular mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZpmLaurentRing {
    pub p: u64,
    pub modulus: u64,
}

impl ZpmLaurentRing {
    pub fn new(p: u64, precision: u32) -> Self {
        ZpmLaurentRing { p, modulus: p.pow(precision) }
    }
}

impl Ring for ZpmLaurentRing {
    type Elem = Laurent<u64>;

    fn zero(&self) -> Laurent<u64> {
        Laurent::zero()
    }

    fn one(&self) -> Laurent<u64> {
        let mut out = Laurent::zero();
        out.coeffs.insert(0, 1);
        out
    }

    fn from_i128(&self, c: i128) -> Laurent<u64> {
        let v = scalar::int128_mod(c, self.modulus);
        let mut out = Laurent::zero();
        if v != 0 {
            out.coeffs.insert(0, v);
        }
        out
    }

    fn add(&self, a: &Laurent<u64>, b: &Laurent<u64>) -> Laurent<u64> {
        let mut out = a.clone();
        for (&e, &c) in &b.coeffs {
            let v = scalar::add_mod(out.coeffs.remove(&e).unwrap_or(0), c, self.modulus);
            if v != 0 {
                out.coeffs.insert(e, v);
            }
        }
        out
    }

    fn neg(&self, a: &Laurent<u64>) -> Laurent<u64> {
        Laurent { coeffs: a.coeffs.iter().map(|(&e, &c)| (e, self.modulus - c)).collect() }
    }

    fn mul(&self, a: &Laurent<u64>, b: &Laurent<u64>) -> Laurent<u64> {
        let mut acc: BTreeMap<i64, u64> = BTreeMap::new();
        for (&ea, &ca) in &a.coeffs {
            for (&eb, &cb) in &b.coeffs {
                let e = ea.checked_add(eb).expect("exponent overflow");
                let t = scalar::mul_mod(ca, cb, self.modulus);
                let v = scalar::add_mod(acc.remove(&e).unwrap_or(0), t, self.modulus);
                if v != 0 {
                    acc.insert(e, v);
                }
            }
        }
        Laurent { coeffs: acc }
    }
}

/// Lift `F_p` coefficients to `[0, p) subset Z`.
pub fn lift_laurent(a: &Laurent<u64>) -> Laurent<i128> {
    Laurent { coeffs: a.coeffs.iter().map(|(&e, &c)| (e, c as i128)).collect() }
}

/// Reduce integer coefficients mod `p`.
pub fn reduce_laurent(a: &Laurent<i128>, p: u64) -> Laurent<u64> {
    let mut out = Laurent::zero();
    for (&e, &c) in &a.coeffs {
        let v = scalar::int128_mod(c, p);
        if v != 0 {
            out.coeffs.insert(e, v);
        }
    }
    out
}

/// The universal polynomials at one level: `S_i`, `P_i`, `N_i` in the
/// interleaved variables `x_j -> 2j`, `y_j -> 2j+1` (the y-block is ignored
/// by `N`) and `F_i` in `x_0..x_{i+1}`, satisfying
///   `w_i(S) = w_i(x) + w_i(y)`, `w_i(P) = w_i(x) * w_i(y)`,
///   `w_i(N) = -w_i(x)`,        `w_i(F) = w_{i+1}(x)`.
#[derive(Debug, Clone)]
pub struct UniversalPolys {
    pub p: u64,
    pub level: u32,
    pub sum: IntPoly,
    pub prod: IntPoly,
    pub neg: IntPoly,
    pub frob: IntPoly,
}

/// Ghost polynomial `w_i = sum_{j<=i} p^j x_j^(p^(i-j))` in the variables
/// selected by `var_of`.
fn ghost_poly(p: u64, i: u32, nvars: usize, var_of: &dyn Fn(u32) -> usize) -> Result<IntPoly> {
    let mut acc = IntPoly::zero(nvars);
    for j in 0..=i {
        let xj = IntPoly::var(nvars, var_of(j));
        let pw = xj.pow(p.pow(i - j) as u32)?;
        acc = acc.add(&pw.scale((p as i128).pow(j))?)?;
    }
    Ok(acc)
}

fn build_levels(p: u64, max_level: u32) -> Result<Vec<Arc<UniversalPolys>>> {
    let mut out: Vec<Arc<UniversalPolys>> = Vec::new();
    for i in 0..=max_level {
        let nv2 = 2 * (i as usize + 1);
        let x_of = |j: u32| 2 * j as usize;
        let y_of = |j: u32| 2 * j as usize + 1;
        // Targets.
        let wx = ghost_poly(p, i, nv2, &x_of)?;
        let wy = ghost_poly(p, i, nv2, &y_of)?;
        let t_sum = wx.add(&wy)?;
        let t_prod = wx.mul(&wy)?;
        let t_neg = wx.scale(-1)?;
        let nv_f = i as usize + 2;
        let t_frob = ghost_poly(p, i + 1, nv_f, &|j| j as usize)?;

        // Solve w_i(G_0..G_i) = target for the top coordinate G_i, given the
        // lower ones: G_i = (target - sum_{j<i} p^j G_j^(p^(i-j))) / p^i.
        let solve = |target: &IntPoly,
                     lower: &dyn Fn(&UniversalPolys) -> &IntPoly,
                     nvars: usize|
         -> Result<IntPoly> {
            let mut rem = target.clone();
            for j in 0..i {
                let g = lower(&out[j as usize]).widen(nvars);
                rem = rem.sub(&g.pow(p.pow(i - j) as u32)?.scale((p as i128).pow(j))?)?;
            }
            rem.div_exact((p as i128).pow(i))
        };

        let sum = solve(&t_sum, &|u| &u.sum, nv2)?;
        let prod = solve(&t_prod, &|u| &u.prod, nv2)?;
        let neg = solve(&t_neg, &|u| &u.neg, nv2)?;
        let frob = solve(&t_frob, &|u| &u.frob, nv_f)?;

        out.push(Arc::new(UniversalPolys { p, level: i, sum, prod, neg, frob }));
    }
    Ok(out)
}

static CACHE: OnceLock<RwLock<HashMap<(u64, u32), Arc<UniversalPolys>>>> = OnceLock::new();

/// Universal polynomials for all levels `<= max_level`, memoized per `(p, i)`.
/// Concurrent duplicate fills write identical values.
pub fn universal_polys(p: u64, max_level: u32) -> Result<Vec<Arc<UniversalPolys>>> {
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    {
        let rd = cache.read().unwrap();
        if (0..=max_level).all(|i| rd.contains_key(&(p, i))) {
            return Ok((0..=max_level).map(|i| rd[&(p, i)].clone()).collect());
        }
    }
    let built = build_levels(p, max_level)?;
    let mut wr = cache.write().unwrap();
    for u in &built {
        wr.entry((p, u.level)).or_insert_with(|| u.clone());
    }
    Ok((0..=max_level).map(|i| wr[&(p, i)].clone()).collect())
}

/// A truncated Witt vector over a coefficient ring; the truncation length is
/// the coordinate count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVector<E> {
    pub coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn len(&self) -> u32 {
        self.coords.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Witt arithmetic over a ring object.
pub struct WittOps<'a, R: Ring> {
    pub ring: &'a R,
    pub p: u64,
}

impl<'a, R: Ring> WittOps<'a, R> {
    pub fn new(ring: &'a R, p: u64) -> Self {
        WittOps { ring, p }
    }

    fn polys(&self, level: u32) -> Result<Vec<Arc<UniversalPolys>>> {
        universal_polys(self.p, level)
    }

    pub fn zero(&self, n: u32) -> WittVector<R::Elem> {
        WittVector { coords: vec![self.ring.zero(); n as usize] }
    }

    pub fn teich(&self, a: &R::Elem, n: u32) -> WittVector<R::Elem> {
        let mut coords = vec![self.ring.zero(); n as usize];
        coords[0] = a.clone();
        WittVector { coords }
    }

    fn eval(&self, poly: &IntPoly, args: &[R::Elem]) -> R::Elem {
        let r = self.ring;
        poly.eval(
            r.zero(),
            &|c| r.from_i128(c),
            &|a, b| r.add(a, b),
            &|a, b| r.mul(a, b),
            args,
        )
    }

    fn binop(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>, which: fn(&UniversalPolys) -> &IntPoly) -> Result<WittVector<R::Elem>> {
        if a.len() != b.len() {
            return Err(Error::ContextMismatch);
        }
        let n = a.len();
        if n == 0 {
            return Ok(self.zero(0));
        }
        let polys = self.polys(n - 1)?;
        let mut coords = Vec::with_capacity(n as usize);
        for i in 0..n as usize {
            let mut args = Vec::with_capacity(2 * (i + 1));
            for j in 0..=i {
                args.push(a.coords[j].clone());
                args.push(b.coords[j].clone());
            }
            coords.push(self.eval(which(&polys[i]), &args));
        }
        Ok(WittVector { coords })
    }

    pub fn add(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.binop(a, b, |u| &u.sum)
    }

    pub fn mul(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.binop(a, b, |u| &u.prod)
    }

    pub fn neg(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let n = a.len();
        if n == 0 {
            return Ok(self.zero(0));
        }
        let polys = self.polys(n - 1)?;
        let mut coords = Vec::with_capacity(n as usize);
        for i in 0..n as usize {
            // N_i is stored in the doubled variable block; the y-variables do
            // not occur.
            let mut args = Vec::with_capacity(2 * (i + 1));
            for j in 0..=i {
                args.push(a.coords[j].clone());
                args.push(self.ring.zero());
            }
            coords.push(self.eval(&polys[i].neg, &args));
        }
        Ok(WittVector { coords })
    }

    pub fn sub(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.add(a, &self.neg(b)?)
    }

    /// Verschiebung: prepend a zero coordinate.
    pub fn v(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut coords = Vec::with_capacity(a.coords.len() + 1);
        coords.push(self.ring.zero());
        coords.extend_from_slice(&a.coords);
        WittVector { coords }
    }

    /// Restriction: drop the last coordinate.
    pub fn r(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        if a.coords.len() <= 1 {
            return Err(Error::LevelUnderflow { have: a.len() });
        }
        WittVector { coords: a.coords[..a.coords.len() - 1].to_vec() }.into_ok()
    }

    /// Frobenius: evaluate the `F_i` polynomials, shortening by one.
    pub fn f(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let n = a.len();
        if n <= 1 {
            return Err(Error::LevelUnderflow { have: n });
        }
        let polys = self.polys(n - 2)?;
        let mut coords = Vec::with_capacity(n as usize - 1);
        for i in 0..(n as usize - 1) {
            coords.push(self.eval(&polys[i].frob, &a.coords[..=i + 1]));
        }
        Ok(WittVector { coords })
    }

    /// Integer multiple `k * a` by double-and-add.
    pub fn int_mul(&self, k: i64, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let mut k = k;
        let mut base = a.clone();
        if k < 0 {
            base = self.neg(&base)?;
            k = -k;
        }
        let mut acc = self.zero(a.len());
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Ghost components `(w_0(a), ..., w_{n-1}(a))`; meaningful as an oracle
    /// only over a `p`-torsion-free coefficient ring.
    pub fn ghost(&self, a: &WittVector<R::Elem>) -> Vec<R::Elem> {
        let n = a.coords.len();
        let r = self.ring;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = r.zero();
            for j in 0..=i {
                let pw = r.pow(&a.coords[j], self.p.pow((i - j) as u32));
                let scaled = r.mul(&r.from_i128((self.p as i128).pow(j as u32)), &pw);
                acc = r.add(&acc, &scaled);
            }
            out.push(acc);
        }
        out
    }
}

trait IntoOk<T> {
    fn into_ok(self) -> Result<T>;
}

impl<T> IntoOk<T> for T {
    fn into_ok(self) -> Result<T> {
        Ok(self)
    }
}

/// The Witt vector of a scalar `b in Z/p^n` over any ring containing `F_p`:
/// coordinates are constants.
pub fn scalar_witt(ring: &FpLaurentRing, ctx: &PrimeContext, b: u64) -> WittVector<Laurent<u64>> {
    let coords = scalar::scalar_to_witt_coords(ctx, b)
        .into_iter()
        .map(|c| ring.monomial(c, 0))
        .collect();
    WittVector { coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FpLaurentRing {
        FpLaurentRing { p }
    }

    #[test]
    fn universal_polys_first_levels() {
        // p=2: S_1 = x_1 + y_1 - x_0 y_0.
        let u = universal_polys(2, 1).unwrap();
        let s1 = &u[1].sum;
        let x0 = IntPoly::var(4, 0);
        let y0 = IntPoly::var(4, 1);
        let x1 = IntPoly::var(4, 2);
        let y1 = IntPoly::var(4, 3);
        let expect = x1.add(&y1).unwrap().sub(&x0.mul(&y0).unwrap()).unwrap();
        assert_eq!(s1, &expect);
        // p=3: S_1 = x_1 + y_1 - (x_0^2 y_0 + x_0 y_0^2).
        let u3 = universal_polys(3, 1).unwrap();
        let mix = x0
            .pow(2)
            .unwrap()
            .mul(&y0)
            .unwrap()
            .add(&x0.mul(&y0.pow(2).unwrap()).unwrap())
            .unwrap();
        let expect3 = x1.add(&y1).unwrap().sub(&mix).unwrap();
        assert_eq!(&u3[1].sum, &expect3);
        // p=2 level 0: S_0 = x_0 + y_0, P_0 = x_0 y_0.
        let a = IntPoly::var(2, 0);
        let b = IntPoly::var(2, 1);
        assert_eq!(&u[0].sum, &a.add(&b).unwrap());
        assert_eq!(&u[0].prod, &a.mul(&b).unwrap());
    }

    /// Symbolic ghost-identity certification of the cached polynomials.
    #[test]
    fn ghost_identities_symbolic() {
        for p in [2u64, 3, 5] {
            let max = if p == 5 { 2 } else { 3 };
            let us = universal_polys(p, max).unwrap();
            for i in 0..=max {
                let nv2 = 2 * (i as usize + 1);
                let x_of = |j: u32| 2 * j as usize;
                let y_of = |j: u32| 2 * j as usize + 1;
                let wx = ghost_poly(p, i, nv2, &x_of).unwrap();
                let wy = ghost_poly(p, i, nv2, &y_of).unwrap();
                // w_i(S_0..S_i) computed by substitution.
                let subst = |which: &dyn Fn(&UniversalPolys) -> IntPoly, nvars: usize| {
                    let mut acc = IntPoly::zero(nvars);
                    for j in 0..=i {
                        let g = which(&us[j as usize]).widen(nvars);
                        acc = acc
                            .add(&g.pow(p.pow(i - j) as u32).unwrap().scale((p as i128).pow(j)).unwrap())
                            .unwrap();
                    }
                    acc
                };
                assert_eq!(subst(&|u| u.sum.clone(), nv2), wx.add(&wy).unwrap());
                assert_eq!(subst(&|u| u.prod.clone(), nv2), wx.mul(&wy).unwrap());
                assert_eq!(subst(&|u| u.neg.clone(), nv2), wx.scale(-1).unwrap());
                let nv_f = i as usize + 2;
                let target = ghost_poly(p, i + 1, nv_f, &|j| j as usize).unwrap();
                assert_eq!(subst(&|u| u.frob.widen(nv_f), nv_f), target);
            }
        }
    }

    #[test]
    fn teich_plus_teich_p2() {
        // [1] + [1] = (0, 1) = V([1]) at p=2, n=2.
        let ring = fp(2);
        let ops = WittOps::new(&ring, 2);
        let one = ops.teich(&ring.one(), 2);
        let s = ops.add(&one, &one).unwrap();
        assert_eq!(s.coords[0], ring.zero());
        assert_eq!(s.coords[1], ring.one());
        // [t] + [t] = (0, t^2).
        let t = ops.teich(&ring.monomial(1, 1), 2);
        let s = ops.add(&t, &t).unwrap();
        assert_eq!(s.coords[0], ring.zero());
        assert_eq!(s.coords[1], ring.monomial(1, 2));
    }

    #[test]
    fn v_times_v_p2() {
        // V([1]) * V([1]) = (0, 0) at p=2, n=2.
        let ring = fp(2);
        let ops = WittOps::new(&ring, 2);
        let v1 = ops.v(&ops.teich(&ring.one(), 1));
        let prod = ops.mul(&v1, &v1).unwrap();
        assert!(prod.coords.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn teich_multiplicative() {
        let ring = fp(3);
        let ops = WittOps::new(&ring, 3);
        let a = ops.teich(&ring.monomial(2, 5), 3);
        let b = ops.teich(&ring.monomial(1, -2), 3);
        let prod = ops.mul(&a, &b).unwrap();
        assert_eq!(prod, ops.teich(&ring.monomial(2, 3), 3));
    }

    #[test]
    fn ghost_examples() {
        let ring = IntLaurentRing;
        let ops = WittOps::new(&ring, 2);
        let one = ops.teich(&ring.one(), 2);
        assert_eq!(
            ops.ghost(&one),
            vec![ring.one(), ring.one()],
        );
        let v1 = ops.v(&ops.teich(&ring.one(), 1));
        assert_eq!(ops.ghost(&v1), vec![ring.zero(), ring.from_i128(2)]);
        let w = WittVector { coords: vec![ring.one(), ring.one()] };
        assert_eq!(ops.ghost(&w), vec![ring.one(), ring.from_i128(3)]);
    }

    #[test]
    fn fv_is_p() {
        // F(V(x)) = p*x for sampled x over F_3[t,1/t].
        let ring = fp(3);
        let ops = WittOps::new(&ring, 3);
        let x = WittVector {
            coords: vec![ring.monomial(2, -1), ring.monomial(1, 4), ring.monomial(2, 0)],
        };
        let fv = ops.f(&ops.v(&x)).unwrap();
        let px = ops.int_mul(3, &x).unwrap();
        assert_eq!(fv, px);
    }

    #[test]
    fn frobenius_of_teich() {
        let ring = fp(2);
        let ops = WittOps::new(&ring, 2);
        let a = ring.monomial(1, 3);
        let fa = ops.f(&ops.teich(&a, 3)).unwrap();
        assert_eq!(fa, ops.teich(&ring.mul(&a, &a), 2));
    }
}
