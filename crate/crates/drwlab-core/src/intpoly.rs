//! Sparse multivariate polynomials over the integers, used only to build and
//! certify the universal Witt polynomials. Exponent vectors are dense `u8`
//! slices (degrees stay below `p^level`), coefficients are checked `i128`.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub const TERM_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Box<[u8]>, i128>,
}

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::CoefficientOverflow)
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::CoefficientOverflow)
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        let mut p = IntPoly::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0u8; nvars].into_boxed_slice(), c);
        }
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0u8; nvars];
        e[idx] = 1;
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(e.into_boxed_slice(), 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, e: Box<[u8]>, c: i128) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = checked_add(*o.get(), c)?;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        if self.terms.len() > TERM_BUDGET {
            return Err(Error::TermBudget { terms: self.terms.len(), budget: TERM_BUDGET });
        }
        Ok(())
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.insert(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.insert(e.clone(), -c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = IntPoly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let mut e = vec![0u8; self.nvars];
                for i in 0..self.nvars {
                    e[i] = ea[i].checked_add(eb[i]).ok_or(Error::CoefficientOverflow)?;
                }
                out.insert(e.into_boxed_slice(), checked_mul(ca, cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: i128) -> Result<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (e, &a) in &self.terms {
            out.insert(e.clone(), checked_mul(a, c)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<IntPoly> {
        let mut acc = IntPoly::constant(self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact division by an integer; every coefficient must be divisible.
    pub fn div_exact(&self, d: i128) -> Result<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if c % d != 0 {
                return Err(Error::CoefficientOverflow);
            }
            out.insert(e.clone(), c / d)?;
        }
        Ok(out)
    }

    /// Re-embed into a polynomial ring with more variables (same indices).
    pub fn widen(&self, nvars: usize) -> IntPoly {
        assert!(nvars >= self.nvars);
        let mut out = IntPoly::zero(nvars);
        for (e, &c) in &self.terms {
            let mut w = vec![0u8; nvars];
            w[..self.nvars].copy_from_slice(e);
            out.terms.insert(w.into_boxed_slice(), c);
        }
        out
    }

    /// Evaluate with argument `args[i]` substituted for variable `i`, in any
    /// commutative ring presented by closures.
    pub fn eval<T: Clone>(
        &self,
        zero: T,
        from_i128: &dyn Fn(i128) -> T,
        add: &dyn Fn(&T, &T) -> T,
        mul: &dyn Fn(&T, &T) -> T,
        args: &[T],
    ) -> T {
        assert_eq!(args.len(), self.nvars);
        // Memoize powers of each argument up to the degree actually used.
        let mut powers: Vec<Vec<T>> = args.iter().map(|a| vec![from_i128(1), a.clone()]).collect();
        let mut acc = zero;
        for (e, &c) in &self.terms {
            let mut term = from_i128(c);
            for (i, &d) in e.iter().enumerate() {
                let d = d as usize;
                if d == 0 {
                    continue;
                }
                while powers[i].len() <= d {
                    let last = powers[i].last().unwrap().clone();
                    powers[i].push(mul(&last, &args[i]));
                }
                term = mul(&term, &powers[i][d]);
            }
            acc = add(&acc, &term);
        }
        acc
    }
}
