//! Smith normal form over the Euclidean rings Z, Q and Q[z^±1].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::{LaurentPoly, RingTag};
use super::matrix::RingMatrix;
use super::LinalgError;
use crate::rational::Rat;

/// `u · a · v = s` with `s` diagonal and `s[0][0] | s[1][1] | …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SnfResult {
    pub s: RingMatrix,
    pub u: RingMatrix,
    pub v: RingMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inverse: RingMatrix,
}

impl SnfResult {
    /// Diagonal entries `s[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<LaurentPoly> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &RingMatrix) -> Result<SnfResult, LinalgError> {
    match a.ring() {
        RingTag::Integers => Ok(run::<BigInt>(a)),
        RingTag::Rationals => Ok(run::<Rat>(a)),
        RingTag::LaurentUni => Ok(run::<UniPoly>(a)),
        ring @ RingTag::LaurentMulti(_) => Err(LinalgError::NotPid(ring)),
    }
}

/// A Euclidean domain with a normal form for associates.
pub(crate) trait Euclidean: Clone + PartialEq {
    type Size: Ord;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn size(&self) -> Self::Size;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_rem(&self, d: &Self) -> (Self, Self);
    /// Division whose remainder depends only on the class of `self` modulo a
    /// normalized `d`.
    fn canonical_div_rem(&self, d: &Self) -> (Self, Self) {
        self.div_rem(d)
    }
    /// Unit `u` such that `self · u` is the normalized associate.
    fn normalizing_unit(&self) -> Self;
    fn unit_inverse(&self) -> Self;
    fn from_poly(p: &LaurentPoly) -> Self;
    fn to_poly(&self) -> LaurentPoly;
}

impl Euclidean for BigInt {
    type Size = BigUint;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn size(&self) -> BigUint {
        self.magnitude().clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        Integer::div_rem(self, d)
    }
    fn canonical_div_rem(&self, d: &Self) -> (Self, Self) {
        Integer::div_mod_floor(self, d)
    }
    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            -<BigInt as One>::one()
        } else {
            <BigInt as One>::one()
        }
    }
    fn unit_inverse(&self) -> Self {
        self.clone()
    }
    fn from_poly(p: &LaurentPoly) -> Self {
        p.constant_term().to_integer()
    }
    fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::constant(0, Rat::from_integer(self.clone()))
    }
}

impl Euclidean for Rat {
    type Size = u8;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn size(&self) -> u8 {
        0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (self / d, Zero::zero())
    }
    fn normalizing_unit(&self) -> Self {
        if Zero::is_zero(self) {
            One::one()
        } else {
            self.recip()
        }
    }
    fn unit_inverse(&self) -> Self {
        self.recip()
    }
    fn from_poly(p: &LaurentPoly) -> Self {
        p.constant_term()
    }
    fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::constant(0, self.clone())
    }
}

/// Univariate Laurent polynomial viewed as a Euclidean domain element.
#[derive(Clone, PartialEq)]
pub(crate) struct UniPoly(LaurentPoly);

impl Euclidean for UniPoly {
    type Size = (i64, usize);
    fn zero() -> Self {
        UniPoly(LaurentPoly::zero(1))
    }
    fn one() -> Self {
        UniPoly(LaurentPoly::one(1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn size(&self) -> (i64, usize) {
        (self.0.span().unwrap_or(0), self.0.num_terms())
    }
    fn add(&self, o: &Self) -> Self {
        UniPoly(self.0.add(&o.0))
    }
    fn mul(&self, o: &Self) -> Self {
        UniPoly(self.0.mul(&o.0))
    }
    fn neg(&self) -> Self {
        UniPoly(self.0.neg())
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let (q, r) = self.0.div_rem(&d.0);
        (UniPoly(q), UniPoly(r))
    }
    /// Remainder supported on the exponent window `[lo, hi)` of `d`.
    fn canonical_div_rem(&self, d: &Self) -> (Self, Self) {
        let d = &d.0;
        let (lo, lo_c) = d.trailing().map(|(e, c)| (e[0], c.clone())).expect("nonzero divisor");
        let (hi, hi_c) = d.leading().map(|(e, c)| (e[0], c.clone())).expect("nonzero divisor");
        let mut q = LaurentPoly::zero(1);
        let mut r = self.0.clone();
        let mut cancel = |r: &mut LaurentPoly, shift: i64, c: Rat| {
            *r = r.sub(&d.mul_monomial(&[shift], &c));
            q = q.add(&LaurentPoly::monomial(vec![shift], c));
        };
        while let Some((e, c)) = r.leading().map(|(e, c)| (e[0], c.clone())).filter(|&(e, _)| e >= hi) {
            cancel(&mut r, e - hi, c / &hi_c);
        }
        while let Some((e, c)) = r.trailing().map(|(e, c)| (e[0], c.clone())).filter(|&(e, _)| e < lo) {
            cancel(&mut r, e - lo, c / &lo_c);
        }
        (UniPoly(q), UniPoly(r))
    }
    fn normalizing_unit(&self) -> Self {
        UniPoly(self.0.normalizing_unit())
    }
    fn unit_inverse(&self) -> Self {
        UniPoly(self.0.unit_inverse().expect("unit is a monomial"))
    }
    fn from_poly(p: &LaurentPoly) -> Self {
        UniPoly(p.clone())
    }
    fn to_poly(&self) -> LaurentPoly {
        self.0.clone()
    }
}

pub(crate) type Dense<T> = Vec<Vec<T>>;

fn identity<T: Euclidean>(n: usize) -> Dense<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

struct Work<T> {
    a: Dense<T>,
    u: Dense<T>,
    v: Dense<T>,
    v_inv: Dense<T>,
    rows: usize,
    cols: usize,
}

impl<T: Euclidean> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &T) {
        for m in [&mut self.a, &mut self.u] {
            let src_row = m[src].clone();
            for (x, s) in m[dst].iter_mut().zip(&src_row) {
                *x = x.add(&q.mul(s));
            }
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &T) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[src].clone();
                row[dst] = row[dst].add(&q.mul(&s));
            }
        }
        let neg_q = q.neg();
        let dst_row = self.v_inv[dst].clone();
        for (x, d) in self.v_inv[src].iter_mut().zip(&dst_row) {
            *x = x.add(&neg_q.mul(d));
        }
    }

    fn scale_col(&mut self, j: usize, unit: &T) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row[j] = row[j].mul(unit);
            }
        }
        let inv = unit.unit_inverse();
        for x in self.v_inv[j].iter_mut() {
            *x = x.mul(&inv);
        }
    }

    fn scale_row(&mut self, i: usize, unit: &T) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = x.mul(unit);
            }
        }
    }

    fn smallest_in(&self, t: usize, full: bool) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), T::Size)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<((usize, usize), T::Size)>| {
            let x = &self.a[i][j];
            if !x.is_zero() {
                let s = x.size();
                if best.as_ref().is_none_or(|(_, b)| s < *b) {
                    *best = Some(((i, j), s));
                }
            }
        };
        if full {
            for i in t..self.rows {
                for j in t..self.cols {
                    consider(i, j, &mut best);
                }
            }
        } else {
            consider(t, t, &mut best);
            for i in t + 1..self.rows {
                consider(i, t, &mut best);
            }
            for j in t + 1..self.cols {
                consider(t, j, &mut best);
            }
        }
        best.map(|(pos, _)| pos)
    }

    /// Moves the entry at `(i, j)` to `(t, t)` and normalizes it.
    fn move_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        if i != t {
            self.swap_rows(i, t);
        }
        if j != t {
            self.swap_cols(j, t);
        }
        let unit = self.a[t][t].normalizing_unit();
        self.scale_row(t, &unit);
    }

    fn run(&mut self) {
        for t in 0..self.rows.min(self.cols) {
            let Some(pos) = self.smallest_in(t, true) else { break };
            self.move_to_pivot(t, pos);
            loop {
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let (q, _) = self.a[i][t].div_rem(&self.a[t][t]);
                        self.add_row(i, t, &q.neg());
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let (q, _) = self.a[t][j].div_rem(&self.a[t][t]);
                        self.add_col(j, t, &q.neg());
                    }
                }
                let pos = self.smallest_in(t, false).expect("pivot is nonzero");
                if pos != (t, t) {
                    // a remainder smaller than the pivot survived
                    self.move_to_pivot(t, pos);
                    continue;
                }
                let blocker = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].div_rem(&self.a[t][t]).1.is_zero())
                });
                match blocker {
                    Some(i) => {
                        self.add_row(t, i, &T::one());
                        let unit = self.a[t][t].normalizing_unit();
                        self.scale_row(t, &unit);
                    }
                    None => break,
                }
            }
            let unit = self.a[t][t].normalizing_unit();
            self.scale_col(t, &unit);
        }
    }
}

fn run<T: Euclidean>(a: &RingMatrix) -> SnfResult {
    let (rows, cols) = a.shape();
    let dense: Dense<T> = (0..rows)
        .map(|i| (0..cols).map(|j| T::from_poly(a.get(i, j))).collect())
        .collect();
    let mut w = Work {
        a: dense,
        u: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        rows,
        cols,
    };
    w.run();
    let ring = a.ring();
    let back = |m: &Dense<T>, r: usize, c: usize| {
        RingMatrix::new(ring, r, c, m.iter().flatten().map(T::to_poly).collect())
            .expect("SNF stays in the ring")
    };
    SnfResult {
        s: back(&w.a, rows, cols),
        u: back(&w.u, rows, rows),
        v: back(&w.v, cols, cols),
        v_inverse: back(&w.v_inv, cols, cols),
    }
}
