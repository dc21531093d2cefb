//! Rank over the fraction field of the coefficient ring.

use num_bigint::BigInt;
use num_traits::Zero;

use super::laurent::LaurentPoly;
use super::matrix::RingMatrix;
use crate::rational::Rat;

/// Rank of `a` over Q, Q(z) or Q(z₁,…,zₙ).
///
/// Evaluation at a fixed generic point gives a lower bound; when that bound
/// is already the largest possible rank it is returned directly. Otherwise
/// the rank comes from fraction-free elimination over the Laurent ring.
pub fn fraction_field_rank(a: &RingMatrix) -> usize {
    if a.is_zero() {
        return 0;
    }
    let arity = a.ring().arity();
    let cap = a.rows().min(a.cols());
    let lower = evaluation_rank(a, &generic_point(arity));
    if arity == 0 || lower == cap {
        return lower;
    }
    bareiss_rank(a)
}

/// A deterministic point with distinct, nonzero, non-unit coordinates.
pub fn generic_point(arity: usize) -> Vec<Rat> {
    const PRIMES: [i64; 12] = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    (0..arity)
        .map(|i| {
            let p = PRIMES[i % PRIMES.len()] + 50 * (i / PRIMES.len()) as i64;
            Rat::new(BigInt::from(p), BigInt::from(3 + 2 * i as i64))
        })
        .collect()
}

/// Rank over Q of `a` with every variable specialised to `point`.
///
/// Never exceeds [`fraction_field_rank`].
pub fn evaluation_rank(a: &RingMatrix, point: &[Rat]) -> usize {
    let rows: Vec<Vec<Rat>> = a
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|p| p.eval(point)).collect())
        .collect();
    rational_rank(rows)
}

/// Gaussian elimination over Q.
pub fn rational_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] * &inv;
            for (x, y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) elimination. Every intermediate entry is a minor
/// of `a`, so the division by the previous pivot is exact in the ring.
pub(crate) fn bareiss_rank(a: &RingMatrix) -> usize {
    let nvars = a.ring().arity();
    let mut m = a.to_rows();
    let nrows = m.len();
    let ncols = a.cols();
    let mut prev = LaurentPoly::one(nvars);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let pivot = (rank..nrows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].num_terms());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let num = m[rank][col].mul(&m[i][j]).sub(&m[i][col].mul(&m[rank][j]));
                m[i][j] = num.exact_div(&prev).expect("fraction-free elimination divides exactly");
            }
            m[i][col] = LaurentPoly::zero(nvars);
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}
