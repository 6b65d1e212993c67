//! The scalar ring `W_n(F_p) = Z/p^n` and modular helpers.
//!
//! Scalars are canonical residues in `[0, p^n)` stored in a `u64`. The ring
//! isomorphism `W_n(F_p) = Z/p^n` sends the Teichmueller lift of `c` to the
//! multiplicative lift `c^(p^(n-1)) mod p^n`, Frobenius and restriction to the
//! natural surjection `Z/p^(n+1) -> Z/p^n`, and Verschiebung to
//! multiplication by `p`.

use crate::error::{Error, Result};

/// Moduli are capped so that products fit in `u128` with room to spare.
const MAX_MODULUS_BITS: u32 = 48;

/// The ambient prime `p` and truncation length `n` of `W_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    n: u32,
}

impl PrimeContext {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadContext(format!("{p} is not prime")));
        }
        if n < 1 {
            return Err(Error::BadContext("truncation length must be >= 1".into()));
        }
        let bits = (64 - p.leading_zeros()) * n;
        if bits > MAX_MODULUS_BITS {
            return Err(Error::ModulusOverflow { p, n });
        }
        Ok(PrimeContext { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^k` for `k <= n` (and slightly beyond, used by level shifts).
    pub fn pw(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// The modulus `p^n`.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Context one level down; errors at length 1.
    pub fn lower(&self) -> Result<Self> {
        if self.n == 1 {
            return Err(Error::LevelUnderflow { have: 1 });
        }
        Ok(PrimeContext { p: self.p, n: self.n - 1 })
    }

    /// Context one level up.
    pub fn raise(&self) -> Result<Self> {
        PrimeContext::new(self.p, self.n + 1)
    }

    pub fn at_length(&self, n: u32) -> Result<Self> {
        PrimeContext::new(self.p, n)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
pub fn int_mod(a: i64, m: u64) -> u64 {
    let m_i = m as i128;
    let r = (a as i128).rem_euclid(m_i);
    r as u64
}

pub fn int128_mod(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of a unit mod `m = p^k` via extended Euclid.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    assert!(m > 1);
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "attempted to invert a non-unit mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// `p`-adic valuation of `x` in `Z/p^n`; zero is assigned valuation `n`.
pub fn val_p(x: u64, p: u64, n: u32) -> u32 {
    if x == 0 {
        return n;
    }
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Teichmueller lift of `c in F_p` into `Z/p^n`: the multiplicative lift
/// `c^(p^(n-1)) mod p^n`.
pub fn teich_scalar(ctx: &PrimeContext, c: u64) -> u64 {
    let c = c % ctx.p;
    if c == 0 {
        return 0;
    }
    let m = ctx.modulus();
    let mut acc = c % m;
    for _ in 1..ctx.n {
        acc = pow_mod(acc, ctx.p, m);
    }
    acc
}

/// Witt coordinates `(a_0, ..., a_{n-1})` over `F_p` of a scalar `b in Z/p^n`,
/// i.e. the unique coordinates with `b = sum_i p^i * teich(a_i)`.
pub fn scalar_to_witt_coords(ctx: &PrimeContext, b: u64) -> Vec<u64> {
    let mut coords = Vec::with_capacity(ctx.n as usize);
    let mut b = b % ctx.modulus();
    for i in 0..ctx.n {
        let level = PrimeContext { p: ctx.p, n: ctx.n - i };
        let a = b % ctx.p;
        coords.push(a);
        let t = teich_scalar(&level, a);
        debug_assert!(b >= t || (b + level.modulus() - t).is_multiple_of(ctx.p));
        b = (b + level.modulus() - t) % level.modulus() / ctx.p;
    }
    coords
}

/// Inverse of [`scalar_to_witt_coords`].
pub fn witt_coords_to_scalar(ctx: &PrimeContext, coords: &[u64]) -> u64 {
    assert_eq!(coords.len(), ctx.n as usize);
    let m = ctx.modulus();
    let mut acc = 0u64;
    for (i, &a) in coords.iter().enumerate() {
        let level = PrimeContext { p: ctx.p, n: ctx.n - i as u32 };
        let t = teich_scalar(&level, a) % m;
        acc = add_mod(acc, mul_mod(ctx.pw(i as u32) % m, t, m), m);
    }
    acc
}
