use std::fmt;

use num_bigint::BigInt;

use super::laurent::{LaurentPoly, RingTag};
use super::LinalgError;
use crate::rational::Rat;

/// Dense matrix over one of the rings named by [`RingTag`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: RingTag,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl RingMatrix {
    pub fn new(
        ring: RingTag,
        rows: usize,
        cols: usize,
        entries: Vec<LaurentPoly>,
    ) -> Result<Self, LinalgError> {
        if !ring.is_valid() {
            return Err(LinalgError::InvalidRing(ring));
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount { rows, cols, got: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|e| !ring.contains(e)) {
            return Err(LinalgError::ForeignEntry {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
                ring,
            });
        }
        Ok(RingMatrix { ring, rows, cols, entries })
    }

    pub fn from_rows(ring: RingTag, rows: Vec<Vec<LaurentPoly>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinalgError::RaggedRows);
        }
        Self::new(ring, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(ring: RingTag, rows: usize, cols: usize) -> Self {
        RingMatrix {
            ring,
            rows,
            cols,
            entries: vec![LaurentPoly::zero(ring.arity()); rows * cols],
        }
    }

    pub fn identity(ring: RingTag, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = LaurentPoly::one(ring.arity());
        }
        m
    }

    /// Integer matrix from row-major small integers.
    pub fn integers(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        RingMatrix {
            ring: RingTag::Integers,
            rows,
            cols,
            entries: values.iter().map(|&v| LaurentPoly::integer(v)).collect(),
        }
    }

    pub fn from_bigints(rows: usize, cols: usize, values: Vec<BigInt>) -> Result<Self, LinalgError> {
        let entries = values
            .into_iter()
            .map(|v| LaurentPoly::constant(0, Rat::from_integer(v)))
            .collect();
        Self::new(RingTag::Integers, rows, cols, entries)
    }

    /// Rational matrix from row-major values.
    pub fn rationals(rows: usize, cols: usize, values: Vec<Rat>) -> Self {
        assert_eq!(values.len(), rows * cols);
        RingMatrix {
            ring: RingTag::Rationals,
            rows,
            cols,
            entries: values.into_iter().map(|v| LaurentPoly::constant(0, v)).collect(),
        }
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        assert!(self.ring.contains(&v), "entry outside ring {:?}", self.ring);
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[LaurentPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        RingMatrix { ring: self.ring, rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ring != other.ring {
            return Err(LinalgError::RingMismatch(self.ring, other.ring));
        }
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ring != other.ring {
            return Err(LinalgError::RingMismatch(self.ring, other.ring));
        }
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RingMatrix { ring: self.ring, rows: self.rows + other.rows, cols: self.cols, entries })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ring != other.ring {
            return Err(LinalgError::RingMismatch(self.ring, other.ring));
        }
        let mut out = Self::zeros(self.ring, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[r * out.cols + c] = self.get(r, c).clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.entries[(r + self.rows) * out.cols + c + self.cols] = other.get(r, c).clone();
            }
        }
        Ok(out)
    }

    /// Same entries viewed over another ring with the same arity.
    pub fn with_ring(&self, ring: RingTag) -> Result<Self, LinalgError> {
        Self::new(ring, self.rows, self.cols, self.entries.clone())
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix<{}>{:?}", self.ring.name(), self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_integer_matrices() {
        let a = RingMatrix::integers(2, 2, &[1, 2, 3, 4]);
        let b = RingMatrix::integers(2, 1, &[1, -1]);
        assert_eq!(a.mul(&b).unwrap(), RingMatrix::integers(2, 1, &[-1, -1]));
        assert!(b.mul(&a).is_err());
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            RingMatrix::new(RingTag::Integers, 2, 2, vec![]),
            Err(LinalgError::EntryCount { .. })
        ));
        let half = LaurentPoly::constant(0, crate::rational::rat(1, 2));
        assert!(matches!(
            RingMatrix::new(RingTag::Integers, 1, 1, vec![half]),
            Err(LinalgError::ForeignEntry { .. })
        ));
        assert!(RingMatrix::new(RingTag::LaurentMulti(0), 0, 0, vec![]).is_err());
    }

    #[test]
    fn stacking() {
        let a = RingMatrix::integers(1, 2, &[1, 2]);
        let b = RingMatrix::integers(1, 2, &[3, 4]);
        assert_eq!(a.vstack(&b).unwrap(), RingMatrix::integers(2, 2, &[1, 2, 3, 4]));
        let d = a.block_diag(&RingMatrix::integers(1, 1, &[5])).unwrap();
        assert_eq!(d, RingMatrix::integers(2, 3, &[1, 2, 0, 0, 0, 5]));
        assert_eq!(a.transpose().shape(), (2, 1));
    }
}
