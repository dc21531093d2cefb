//! Row echelon bases, membership and saturation over Z, Q and Q[z^±1],
//! using row operations only.

use num_bigint::BigInt;

use super::laurent::{LaurentPoly, RingTag};
use super::matrix::RingMatrix;
use super::snf::{Dense, Euclidean, UniPoly};
use super::LinalgError;
use crate::rational::Rat;

/// Hermite row echelon form: nonzero rows spanning the same submodule,
/// normalized pivots, entries above each pivot reduced modulo it.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    pub rows: RingMatrix,
    pub pivots: Vec<usize>,
}

fn dense<T: Euclidean>(a: &RingMatrix) -> Dense<T> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| T::from_poly(a.get(i, j))).collect()).collect()
}

fn back<T: Euclidean>(ring: RingTag, m: &Dense<T>, cols: usize) -> RingMatrix {
    RingMatrix::new(ring, m.len(), cols, m.iter().flatten().map(T::to_poly).collect()).expect("stays in the ring")
}

/// `dst -= q · src`
fn sub_multiple<T: Euclidean>(dst: &mut [T], src: &[T], q: &T) {
    if q.is_zero() {
        return;
    }
    let neg = q.neg();
    for (x, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *x = x.add(&neg.mul(s));
        }
    }
}

fn echelon_dense<T: Euclidean>(mut a: Dense<T>, cols: usize) -> (Dense<T>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        loop {
            let best = (r..a.len()).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].size());
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let (q, rem) = a[i][c].div_rem(&a[r][c]);
                    let (head, tail) = a.split_at_mut(i);
                    sub_multiple(&mut tail[0], &head[r], &q);
                    done &= rem.is_zero();
                }
            }
            if done {
                break;
            }
        }
        if r == a.len() || a[r][c].is_zero() {
            continue;
        }
        let unit = a[r][c].normalizing_unit();
        for x in a[r].iter_mut() {
            *x = x.mul(&unit);
        }
        for i in 0..r {
            let (q, _) = a[i][c].canonical_div_rem(&a[r][c]);
            let (head, tail) = a.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], &q);
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn member<T: Euclidean>(rows: &Dense<T>, pivots: &[usize], v: &mut [T]) -> bool {
    for (row, &c) in rows.iter().zip(pivots) {
        let (q, rem) = v[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        sub_multiple(v, row, &q);
    }
    v.iter().all(T::is_zero)
}

/// Basis of the saturation of the row space of a full-rank echelon `h`:
/// column reduction gives `h = t·s` with `t` lower triangular and the rows of
/// `s` extendable to a basis, so `s = t⁻¹·h`.
fn saturate<T: Euclidean>(h: &Dense<T>, cols: usize) -> Dense<T> {
    let r = h.len();
    let transposed: Dense<T> = (0..cols).map(|j| h.iter().map(|row| row[j].clone()).collect()).collect();
    let (u, _) = echelon_dense(transposed, r);
    let mut s: Dense<T> = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = h[i].clone();
        for (j, sj) in s.iter().enumerate() {
            sub_multiple(&mut row, sj, &u[j][i]);
        }
        let d = &u[i][i];
        let row = row
            .iter()
            .map(|x| {
                let (q, rem) = x.div_rem(d);
                debug_assert!(rem.is_zero(), "triangular factor divides");
                q
            })
            .collect();
        s.push(row);
    }
    echelon_dense(s, cols).0
}

macro_rules! by_ring {
    ($ring:expr, $f:ident, $($arg:expr),*) => {
        match $ring {
            RingTag::Integers => Ok($f::<BigInt>($($arg),*)),
            RingTag::Rationals => Ok($f::<Rat>($($arg),*)),
            RingTag::LaurentUni => Ok($f::<UniPoly>($($arg),*)),
            ring @ RingTag::LaurentMulti(_) => Err(LinalgError::NotPid(ring)),
        }
    };
}

fn echelon_of<T: Euclidean>(a: &RingMatrix) -> Echelon {
    let (rows, pivots) = echelon_dense(dense::<T>(a), a.cols());
    Echelon { rows: back(a.ring(), &rows, a.cols()), pivots }
}

pub fn row_echelon(a: &RingMatrix) -> Result<Echelon, LinalgError> {
    by_ring!(a.ring(), echelon_of, a)
}

fn contains<T: Euclidean>(a: &RingMatrix, v: &[LaurentPoly]) -> bool {
    let (rows, pivots) = echelon_dense(dense::<T>(a), a.cols());
    let mut v: Vec<T> = v.iter().map(T::from_poly).collect();
    member(&rows, &pivots, &mut v)
}

/// Whether `v` lies in the row space of `a` over the ring.
pub fn row_space_member(a: &RingMatrix, v: &[LaurentPoly]) -> Result<bool, LinalgError> {
    if v.len() != a.cols() {
        return Err(LinalgError::ShapeMismatch { left: (1, v.len()), right: a.shape() });
    }
    by_ring!(a.ring(), contains, a, v)
}

fn saturation_of<T: Euclidean>(a: &RingMatrix) -> RingMatrix {
    let (h, _) = echelon_dense(dense::<T>(a), a.cols());
    back(a.ring(), &saturate(&h, a.cols()), a.cols())
}

/// Echelon basis of `(Frac·rowspace(a)) ∩ Rⁿ`.
pub fn saturation(a: &RingMatrix) -> Result<RingMatrix, LinalgError> {
    by_ring!(a.ring(), saturation_of, a)
}
