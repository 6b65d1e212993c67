//! Exact linear algebra over `Z/p^n` and finite window modules.
//!
//! A window module is a finite abelian `p`-group of normal-form coefficients
//! within bounded exponents, presented by generators. Coordinates of mixed
//! modulus `p^(n-s)` are embedded into `Z/p^N` by the `p^s`-scaling map, so
//! all computations run over a single chain ring; membership and lengths are
//! unaffected because the embedding is injective. Spans are kept in Howell
//! canonical form (row echelon closed under the `p^(N-e)`-tails), which makes
//! membership, length, and equality cheap and deterministic.

use crate::error::{Error, Result};
use crate::forms::{Form, NormalForm0, NormalForm1};
use crate::scalar::{self, PrimeContext};
use std::collections::HashMap;
use std::sync::Arc;

/// Exponent bounds applied to head/dlog and deep/dv keys of degree-`q` forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub q: u8,
    pub min_exp: i64,
    pub max_exp: i64,
}

impl WindowSpec {
    pub fn new(q: u8, min_exp: i64, max_exp: i64) -> Self {
        assert!(min_exp <= max_exp);
        WindowSpec { q, min_exp, max_exp }
    }

    pub fn contains(&self, e: i64) -> bool {
        self.min_exp <= e && e <= self.max_exp
    }

    /// Symmetric enlargement by a guard band.
    pub fn grow(&self, guard: i64) -> Self {
        WindowSpec { q: self.q, min_exp: self.min_exp - guard, max_exp: self.max_exp + guard }
    }

    /// Exponent dilation, used for images under `F^k`.
    pub fn dilate(&self, factor: i64) -> Self {
        WindowSpec {
            q: self.q,
            min_exp: self.min_exp.checked_mul(factor).expect("window overflow"),
            max_exp: self.max_exp.checked_mul(factor).expect("window overflow"),
        }
    }
}

/// One ambient coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Head(i64),
    Deep(u32, i64),
    Dlog(i64),
    Dv(u32, i64),
}

/// An ordered coordinate list; each coordinate carries its modulus `p^(m_c)`
/// and belongs to a component (components support direct sums of groups of
/// different truncation lengths or degrees).
#[derive(Debug)]
pub struct Ambient {
    pub p: u64,
    /// Embedding exponent: all vectors live in `(Z/p^nn)^coords`.
    pub nn: u32,
    pub coords: Vec<(u8, Coord)>,
    pub mod_exp: Vec<u32>,
    index: HashMap<(u8, Coord), usize>,
    /// `(ctx, q)` per component, for converting vectors back to forms.
    pub components: Vec<(PrimeContext, u8)>,
}

impl Ambient {
    /// Ambient for degree-`q` forms at context `ctx` within `window`.
    pub fn for_forms(ctx: PrimeContext, window: WindowSpec) -> Arc<Ambient> {
        Ambient::sum(&[(ctx, window)])
    }

    /// Direct sum ambient over several `(ctx, window)` components.
    pub fn sum(parts: &[(PrimeContext, WindowSpec)]) -> Arc<Ambient> {
        let p = parts[0].0.p();
        let nn = parts.iter().map(|(c, _)| c.n()).max().unwrap();
        let mut coords = Vec::new();
        let mut mod_exp = Vec::new();
        let mut components = Vec::new();
        for (comp, (ctx, w)) in parts.iter().enumerate() {
            assert_eq!(ctx.p(), p);
            let comp = comp as u8;
            components.push((*ctx, w.q));
            for i in w.min_exp..=w.max_exp {
                coords.push((comp, if w.q == 0 { Coord::Head(i) } else { Coord::Dlog(i) }));
                mod_exp.push(ctx.n());
            }
            for s in 1..ctx.n() {
                for j in w.min_exp..=w.max_exp {
                    if j != 0 && j % p as i64 != 0 {
                        coords.push((comp, if w.q == 0 { Coord::Deep(s, j) } else { Coord::Dv(s, j) }));
                        mod_exp.push(ctx.n() - s);
                    }
                }
            }
        }
        let index = coords.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Arc::new(Ambient { p, nn, coords, mod_exp, index, components })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.nn)
    }

    /// Embedding scale `p^(nn - m_c)` of a coordinate.
    pub fn scale(&self, c: usize) -> u64 {
        self.p.pow(self.nn - self.mod_exp[c])
    }

    pub fn index_of(&self, comp: u8, coord: Coord) -> Option<usize> {
        self.index.get(&(comp, coord)).copied()
    }

    fn put(&self, vec: &mut [u64], comp: u8, coord: Coord, val: u64) -> Result<()> {
        if val == 0 {
            return Ok(());
        }
        let Some(k) = self.index_of(comp, coord) else {
            return Err(Error::WindowTooSmall(format!("{coord:?} outside ambient window")));
        };
        let m = self.modulus();
        vec[k] = scalar::add_mod(vec[k], scalar::mul_mod(val % m, self.scale(k), m), m);
        Ok(())
    }

    pub fn nf0_to_vec(&self, comp: u8, x: &NormalForm0) -> Result<Vec<u64>> {
        let mut v = vec![0u64; self.len()];
        for (&i, &b) in &x.head {
            self.put(&mut v, comp, Coord::Head(i), b)?;
        }
        for (&(s, j), &c) in &x.deep {
            self.put(&mut v, comp, Coord::Deep(s, j), c)?;
        }
        Ok(v)
    }

    pub fn nf1_to_vec(&self, comp: u8, x: &NormalForm1) -> Result<Vec<u64>> {
        let mut v = vec![0u64; self.len()];
        for (&i, &a) in &x.dlog {
            self.put(&mut v, comp, Coord::Dlog(i), a)?;
        }
        for (&(s, j), &c) in &x.dv {
            self.put(&mut v, comp, Coord::Dv(s, j), c)?;
        }
        Ok(v)
    }

    pub fn form_to_vec(&self, comp: u8, x: &Form) -> Result<Vec<u64>> {
        match x {
            Form::Zero(x) => self.nf0_to_vec(comp, x),
            Form::One(x) => self.nf1_to_vec(comp, x),
        }
    }

    /// Back-conversion; the component selects context and degree.
    pub fn vec_to_form(&self, comp: u8, v: &[u64]) -> Form {
        let (ctx, q) = self.components[comp as usize];
        let mut nf0 = NormalForm0::zero(ctx);
        let mut nf1 = NormalForm1::zero(ctx);
        for (k, &(cc, coord)) in self.coords.iter().enumerate() {
            if cc != comp || v[k] == 0 {
                continue;
            }
            let sc = self.scale(k);
            debug_assert_eq!(v[k] % sc, 0, "vector not in the embedded lattice");
            let val = v[k] / sc;
            match coord {
                Coord::Head(i) => nf0.add_head(i, val),
                Coord::Deep(s, j) => nf0.push_deep(s, j, val),
                Coord::Dlog(i) => nf1.add_dlog(i, val),
                Coord::Dv(s, j) => nf1.push_dv(s, j, val),
            }
        }
        if q == 0 {
            Form::Zero(nf0)
        } else {
            Form::One(nf1)
        }
    }
}

/// Dense matrix over `Z/p^nn`.
#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub m: u64,
    pub p: u64,
    pub nn: u32,
    pub a: Vec<u64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, p: u64, nn: u32) -> Self {
        Mat { rows, cols, m: p.pow(nn), p, nn, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64, nn: u32) -> Self {
        let mut m = Mat::zero(n, n, p, nn);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_cols(cols: &[Vec<u64>], rows: usize, p: u64, nn: u32) -> Self {
        let mut m = Mat::zero(rows, cols.len(), p, nn);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m[(i, j)] = col[i] % m.m;
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols, self.p, self.nn);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = scalar::add_mod(out[(i, j)], scalar::mul_mod(v, other[(k, j)], self.m), self.m);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: u64) {
        for k in 0..self.cols {
            self[(i, k)] = scalar::mul_mod(self[(i, k)], c, self.m);
        }
    }

    /// `row_i -= c * row_j`.
    fn row_op(&mut self, i: usize, j: usize, c: u64) {
        for k in 0..self.cols {
            let t = scalar::mul_mod(c, self[(j, k)], self.m);
            self[(i, k)] = scalar::sub_mod(self[(i, k)], t, self.m);
        }
    }

    /// `col_i -= c * col_j`.
    fn col_op(&mut self, i: usize, j: usize, c: u64) {
        for r in 0..self.rows {
            let t = scalar::mul_mod(c, self[(r, j)], self.m);
            self[(r, i)] = scalar::sub_mod(self[(r, i)], t, self.m);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.a[i * self.cols + j]
    }
}

/// Smith normal form over `Z/p^nn`: `left * a * right = d` with invertible
/// transforms and diagonal `p`-power divisors, each dividing the next.
#[derive(Debug, Clone)]
pub struct Snf {
    pub divisors: Vec<u64>,
    pub left: Mat,
    pub right: Mat,
    pub d: Mat,
}

/// Deterministic SNF: pivots prefer units, then minimal `p`-adic valuation,
/// ties broken by lowest row then column index.
pub fn snf(input: &Mat) -> Snf {
    let (p, nn) = (input.p, input.nn);
    let mut d = input.clone();
    let mut left = Mat::identity(d.rows, p, nn);
    let mut right = Mat::identity(d.cols, p, nn);
    let k_max = d.rows.min(d.cols);
    let mut divisors = Vec::new();
    for k in 0..k_max {
        // Locate the minimal-valuation pivot in the remaining block.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..d.rows {
            for j in k..d.cols {
                let x = d[(i, j)];
                if x == 0 {
                    continue;
                }
                let v = scalar::val_p(x, p, nn);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        d.swap_rows(k, pi);
        left.swap_rows(k, pi);
        d.swap_cols(k, pj);
        right.swap_cols(k, pj);
        // Normalize the pivot to exactly p^e.
        let unit = d[(k, k)] / p.pow(e);
        let inv = scalar::inv_mod(unit, d.m);
        d.scale_row(k, inv);
        left.scale_row(k, inv);
        // Clear the column, then the row; all entries have valuation >= e.
        for i in k + 1..d.rows {
            if d[(i, k)] != 0 {
                let q = d[(i, k)] / p.pow(e);
                d.row_op(i, k, q);
                left.row_op(i, k, q);
            }
        }
        for j in k + 1..d.cols {
            if d[(k, j)] != 0 {
                let q = d[(k, j)] / p.pow(e);
                d.col_op(j, k, q);
                right.col_op(j, k, q);
            }
        }
        divisors.push(p.pow(e));
    }
    Snf { divisors, left, right, d }
}

/// Generators of the kernel of the column map `(Z/p^nn)^cols -> (Z/p^nn)^rows`.
pub fn kernel_gens(h: &Mat) -> Vec<Vec<u64>> {
    let s = snf(h);
    let nn = h.nn;
    let p = h.p;
    let mut gens = Vec::new();
    for j in 0..h.cols {
        let e = if j < s.divisors.len() { scalar::val_p(s.divisors[j], p, nn) } else { nn };
        if e == 0 {
            continue;
        }
        // D * (p^(nn-e) e_j) = 0, so V * that is a kernel generator.
        let lam = p.pow(nn - e);
        let col: Vec<u64> = (0..h.cols).map(|i| scalar::mul_mod(s.right[(i, j)], lam % h.m, h.m)).collect();
        if col.iter().any(|&x| x != 0) {
            gens.push(col);
        }
    }
    gens
}

/// A submodule of an ambient window, kept in Howell canonical form.
#[derive(Debug, Clone)]
pub struct WindowModule {
    pub ambient: Arc<Ambient>,
    /// pivot coordinate -> normalized row.
    rows: std::collections::BTreeMap<usize, Vec<u64>>,
}

impl WindowModule {
    pub fn empty(ambient: Arc<Ambient>) -> Self {
        WindowModule { ambient, rows: Default::default() }
    }

    pub fn from_vecs(ambient: Arc<Ambient>, gens: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut m = WindowModule::empty(ambient);
        for g in gens {
            m.insert(g);
        }
        m.canonicalize();
        m
    }

    pub fn from_forms(ambient: Arc<Ambient>, gens: &[Form]) -> Result<Self> {
        let mut m = WindowModule::empty(ambient.clone());
        for g in gens {
            m.insert(ambient.form_to_vec(0, g)?);
        }
        m.canonicalize();
        Ok(m)
    }

    pub fn insert_form(&mut self, comp: u8, g: &Form) -> Result<()> {
        let v = self.ambient.form_to_vec(comp, g)?;
        self.insert(v);
        Ok(())
    }

    /// Insert an already-embedded coordinate vector.
    pub fn insert_vec(&mut self, v: Vec<u64>) {
        self.insert(v);
        self.canonicalize();
    }

    /// Insert without recanonicalizing (membership and length stay exact;
    /// only the canonical-form equality shortcut needs `canonicalize`).
    pub fn insert_vec_fast(&mut self, v: Vec<u64>) {
        self.insert(v);
    }

    fn insert(&mut self, row: Vec<u64>) {
        let p = self.ambient.p;
        let nn = self.ambient.nn;
        let m = self.ambient.modulus();
        let mut work = vec![row];
        while let Some(mut row) = work.pop() {
            loop {
                let Some(c) = row.iter().position(|&x| x != 0) else { break };
                let e = scalar::val_p(row[c], p, nn);
                match self.rows.get(&c) {
                    Some(pivot) => {
                        let ep = scalar::val_p(pivot[c], p, nn);
                        if e >= ep {
                            let q = row[c] / p.pow(ep);
                            for k in c..row.len() {
                                row[k] = scalar::sub_mod(row[k], scalar::mul_mod(q, pivot[k], m), m);
                            }
                        } else {
                            let old = self.rows.remove(&c).unwrap();
                            let unit_inv = scalar::inv_mod(row[c] / p.pow(e), m);
                            for x in row.iter_mut() {
                                *x = scalar::mul_mod(*x, unit_inv, m);
                            }
                            if e > 0 {
                                let tail: Vec<u64> =
                                    row.iter().map(|&x| scalar::mul_mod(x, p.pow(nn - e), m)).collect();
                                work.push(tail);
                            }
                            self.rows.insert(c, row);
                            row = old;
                        }
                    }
                    None => {
                        let unit_inv = scalar::inv_mod(row[c] / p.pow(e), m);
                        for x in row.iter_mut() {
                            *x = scalar::mul_mod(*x, unit_inv, m);
                        }
                        if e > 0 {
                            let tail: Vec<u64> =
                                row.iter().map(|&x| scalar::mul_mod(x, p.pow(nn - e), m)).collect();
                            work.push(tail);
                        }
                        self.rows.insert(c, row);
                        break;
                    }
                }
            }
        }
    }

    /// Reduce entries above each pivot, making the form canonical.
    fn canonicalize(&mut self) {
        let p = self.ambient.p;
        let nn = self.ambient.nn;
        let m = self.ambient.modulus();
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        for &c in &pivots {
            let pivot_row = self.rows[&c].clone();
            let e = scalar::val_p(pivot_row[c], p, nn);
            for (&c2, row) in self.rows.iter_mut() {
                if c2 >= c {
                    continue;
                }
                let q = row[c] / p.pow(e);
                if q != 0 {
                    for k in 0..row.len() {
                        row[k] = scalar::sub_mod(row[k], scalar::mul_mod(q, pivot_row[k], m), m);
                    }
                }
            }
        }
    }

    /// Howell generator rows (canonical).
    pub fn gens(&self) -> Vec<Vec<u64>> {
        self.rows.values().cloned().collect()
    }

    pub fn gen_forms(&self, comp: u8) -> Vec<Form> {
        self.rows.values().map(|v| self.ambient.vec_to_form(comp, v)).collect()
    }

    pub fn contains_vec(&self, x: &[u64]) -> bool {
        let p = self.ambient.p;
        let nn = self.ambient.nn;
        let m = self.ambient.modulus();
        let mut x = x.to_vec();
        for (&c, row) in &self.rows {
            if x[c] == 0 {
                continue;
            }
            let e = scalar::val_p(row[c], p, nn);
            if scalar::val_p(x[c], p, nn) < e {
                return false;
            }
            let q = x[c] / p.pow(e);
            for k in c..x.len() {
                x[k] = scalar::sub_mod(x[k], scalar::mul_mod(q, row[k], m), m);
            }
        }
        x.iter().all(|&v| v == 0)
    }

    pub fn contains_form(&self, comp: u8, g: &Form) -> bool {
        match self.ambient.form_to_vec(comp, g) {
            Ok(v) => self.contains_vec(&v),
            Err(_) => false,
        }
    }

    /// Composition length as an abelian `p`-group.
    pub fn length(&self) -> u64 {
        let p = self.ambient.p;
        let nn = self.ambient.nn;
        self.rows
            .iter()
            .map(|(&c, row)| (nn - scalar::val_p(row[c], p, nn)) as u64)
            .sum()
    }

    pub fn is_subset_of(&self, other: &WindowModule) -> bool {
        self.rows.values().all(|r| other.contains_vec(r))
    }

    pub fn equals(&self, other: &WindowModule) -> bool {
        self.length() == other.length() && self.is_subset_of(other)
    }

    pub fn sum(&self, other: &WindowModule) -> WindowModule {
        let mut out = self.clone();
        for r in other.rows.values() {
            out.insert(r.clone());
        }
        out.canonicalize();
        out
    }

    /// Intersection via the kernel of `[A | B]`.
    pub fn intersect(&self, other: &WindowModule) -> WindowModule {
        let a: Vec<Vec<u64>> = self.gens();
        let b: Vec<Vec<u64>> = other.gens();
        if a.is_empty() || b.is_empty() {
            return WindowModule::empty(self.ambient.clone());
        }
        let mut cols = a.clone();
        cols.extend(b.iter().cloned());
        let h = Mat::from_cols(&cols, self.ambient.len(), self.ambient.p, self.ambient.nn);
        let kers = kernel_gens(&h);
        let m = self.ambient.modulus();
        let mut out = WindowModule::empty(self.ambient.clone());
        for lam in kers {
            let mut v = vec![0u64; self.ambient.len()];
            for (i, g) in a.iter().enumerate() {
                if lam[i] == 0 {
                    continue;
                }
                for k in 0..v.len() {
                    v[k] = scalar::add_mod(v[k], scalar::mul_mod(lam[i], g[k], m), m);
                }
            }
            out.insert(v);
        }
        out.canonicalize();
        out
    }

    /// `{x in self : map(x) in target}`, for a linear `map` given on
    /// generators; `images[i]` must be the image vector of generator `i` in
    /// `target`'s ambient. Source and target may live over different
    /// truncation moduli: the kernel is taken over the larger one, with the
    /// smaller side re-embedded by `p`-scaling.
    pub fn preimage_in(&self, images: &[Vec<u64>], target: &WindowModule) -> WindowModule {
        let gens = self.gens();
        assert_eq!(gens.len(), images.len());
        let p = self.ambient.p;
        let nn_w = self.ambient.nn.max(target.ambient.nn);
        let lift = p.pow(nn_w - target.ambient.nn);
        let m_w = p.pow(nn_w);
        let tgens = target.gens();
        let t_ambient_len = target.ambient.len();
        let mut cols: Vec<Vec<u64>> = images
            .iter()
            .chain(tgens.iter())
            .map(|v| v.iter().map(|&x| scalar::mul_mod(x % m_w, lift, m_w)).collect())
            .collect();
        if cols.is_empty() {
            return self.clone();
        }
        if t_ambient_len == 0 {
            cols = vec![vec![]; cols.len()];
        }
        let h = Mat::from_cols(&cols, t_ambient_len, p, nn_w);
        let kers = kernel_gens(&h);
        let m = self.ambient.modulus();
        let mut out = WindowModule::empty(self.ambient.clone());
        for lam in kers {
            let mut v = vec![0u64; self.ambient.len()];
            for (i, g) in gens.iter().enumerate() {
                let li = lam[i] % m;
                if li == 0 {
                    continue;
                }
                for k in 0..v.len() {
                    v[k] = scalar::add_mod(v[k], scalar::mul_mod(li, g[k], m), m);
                }
            }
            out.insert(v);
        }
        out.canonicalize();
        out
    }

    /// Kernel of a map given on generators (preimage of the zero module in a
    /// target of stated size).
    pub fn kernel_of(&self, images: &[Vec<u64>], target_len: usize, target_ambient: Arc<Ambient>) -> WindowModule {
        let zero = WindowModule::empty(target_ambient);
        let _ = target_len;
        self.preimage_in(images, &zero)
    }

    /// `{x in self : all coordinates with exponent outside [lo, hi] vanish}`.
    pub fn restrict_support(&self, lo: i64, hi: i64) -> WindowModule {
        let outside: Vec<usize> = self
            .ambient
            .coords
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| {
                let e = match c {
                    Coord::Head(i) | Coord::Dlog(i) => *i,
                    Coord::Deep(_, j) | Coord::Dv(_, j) => *j,
                };
                e < lo || e > hi
            })
            .map(|(k, _)| k)
            .collect();
        if outside.is_empty() {
            return self.clone();
        }
        let gens = self.gens();
        let images: Vec<Vec<u64>> = gens.iter().map(|g| outside.iter().map(|&k| g[k]).collect()).collect();
        // Kernel of the projection onto the outside coordinates.
        let p = self.ambient.p;
        let nn = self.ambient.nn;
        if gens.is_empty() {
            return self.clone();
        }
        let h = Mat::from_cols(&images, outside.len(), p, nn);
        let kers = kernel_gens(&h);
        let m = self.ambient.modulus();
        let mut out = WindowModule::empty(self.ambient.clone());
        for lam in kers {
            let mut v = vec![0u64; self.ambient.len()];
            for (i, g) in gens.iter().enumerate() {
                if lam[i] == 0 {
                    continue;
                }
                for k in 0..v.len() {
                    v[k] = scalar::add_mod(v[k], scalar::mul_mod(lam[i], g[k], m), m);
                }
            }
            out.insert(v);
        }
        out.canonicalize();
        out
    }

    /// Smith certificate of the generator matrix; `left * G * right`
    /// reproduces the diagonal.
    pub fn snf_certificate(&self) -> Snf {
        let g = Mat::from_cols(&self.gens(), self.ambient.len(), self.ambient.p, self.ambient.nn);
        snf(&g)
    }

    /// Key span (min, max exponent) over the nonzero coordinates.
    pub fn key_range(&self) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for row in self.rows.values() {
            for (k, &v) in row.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let e = match self.ambient.coords[k].1 {
                    Coord::Head(i) | Coord::Dlog(i) => i,
                    Coord::Deep(_, j) | Coord::Dv(_, j) => j,
                };
                range = Some(match range {
                    None => (e, e),
                    Some((lo, hi)) => (lo.min(e), hi.max(e)),
                });
            }
        }
        range
    }
}

/// A finite quotient `M/N` presented by basis representatives with `p`-power
/// orders `p^(orders[i])`.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub ambient: Arc<Ambient>,
    pub reps: Vec<Vec<u64>>,
    pub orders: Vec<u32>,
}

impl QuotientPresentation {
    pub fn length(&self) -> u64 {
        self.orders.iter().map(|&e| e as u64).sum()
    }
}

/// Present `M/N` (requires `N <= M`, not checked beyond debug).
pub fn quotient(m: &WindowModule, n: &WindowModule) -> QuotientPresentation {
    let gens = m.gens();
    let k = gens.len();
    let p = m.ambient.p;
    let nn = m.ambient.nn;
    let md = m.ambient.modulus();
    if k == 0 {
        return QuotientPresentation { ambient: m.ambient.clone(), reps: vec![], orders: vec![] };
    }
    // Relation lattice: lambda with sum lambda_i g_i in N.
    let mut cols: Vec<Vec<u64>> = gens.clone();
    cols.extend(n.gens());
    let h = Mat::from_cols(&cols, m.ambient.len(), p, nn);
    let kers = kernel_gens(&h);
    let lam_gens: Vec<Vec<u64>> = kers.into_iter().map(|v| v[..k].to_vec()).collect();
    // SNF of the relation matrix on the lambda block.
    let rel = if lam_gens.is_empty() {
        Mat::zero(k, 1, p, nn)
    } else {
        Mat::from_cols(&lam_gens, k, p, nn)
    };
    let s = snf(&rel);
    // (Z/p^nn)^k / Lambda: coordinate i (in U-coordinates) is cyclic of order
    // divisor_i; the basis representative is U^{-1} e_i applied to the gens.
    // left * rel * right = d, so U = s.left; U^{-1} columns solve U x = e_i.
    let u_inv = invert(&s.left);
    let mut reps = Vec::new();
    let mut orders = Vec::new();
    for i in 0..k {
        let e = if i < s.divisors.len() { scalar::val_p(s.divisors[i], p, nn) } else { nn };
        if e == 0 {
            continue;
        }
        let lam = u_inv.col(i);
        let mut v = vec![0u64; m.ambient.len()];
        for (j, g) in gens.iter().enumerate() {
            if lam[j] == 0 {
                continue;
            }
            for t in 0..v.len() {
                v[t] = scalar::add_mod(v[t], scalar::mul_mod(lam[j], g[t], md), md);
            }
        }
        reps.push(v);
        orders.push(e);
    }
    QuotientPresentation { ambient: m.ambient.clone(), reps, orders }
}

/// Inverse of an invertible matrix over `Z/p^nn` by Gaussian elimination
/// (every pivot is a unit).
pub fn invert(a: &Mat) -> Mat {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut w = a.clone();
    let mut inv = Mat::identity(n, a.p, a.nn);
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !w[(i, k)].is_multiple_of(a.p))
            .expect("matrix is not invertible over Z/p^n");
        w.swap_rows(k, pivot);
        inv.swap_rows(k, pivot);
        let c = scalar::inv_mod(w[(k, k)], a.m);
        w.scale_row(k, c);
        inv.scale_row(k, c);
        for i in 0..n {
            if i != k && w[(i, k)] != 0 {
                let q = w[(i, k)];
                w.row_op(i, k, q);
                inv.row_op(i, k, q);
            }
        }
    }
    inv
}
