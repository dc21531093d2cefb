use super::laurent::RingTag;
use super::matrix::RingMatrix;
use super::rank::fraction_field_rank;
use super::LinalgError;

/// Chain complex of finitely generated free modules.
///
/// `differential(p)` is the matrix of `d_p : C_p → C_{p−1}` acting on column
/// vectors, so it has `rank(C_{p−1})` rows and `rank(C_p)` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeChainComplex {
    ring: RingTag,
    ranks: Vec<usize>,
    differentials: Vec<RingMatrix>,
}

impl FreeChainComplex {
    /// `differentials[i]` is `d_{i+1}`; there must be exactly
    /// `ranks.len() − 1` of them (none for an empty or single-degree complex).
    pub fn new(
        ring: RingTag,
        ranks: Vec<usize>,
        differentials: Vec<RingMatrix>,
    ) -> Result<Self, LinalgError> {
        if differentials.len() != ranks.len().saturating_sub(1) {
            return Err(LinalgError::DifferentialCount {
                degrees: ranks.len(),
                got: differentials.len(),
            });
        }
        for (i, d) in differentials.iter().enumerate() {
            let p = i + 1;
            if d.ring() != ring {
                return Err(LinalgError::RingMismatch(ring, d.ring()));
            }
            if d.shape() != (ranks[p - 1], ranks[p]) {
                return Err(LinalgError::DifferentialShape {
                    degree: p,
                    expected: (ranks[p - 1], ranks[p]),
                    got: d.shape(),
                });
            }
        }
        for p in 1..differentials.len() {
            let comp = differentials[p - 1].mul(&differentials[p])?;
            if !comp.is_zero() {
                return Err(LinalgError::NotAComplex { degree: p + 1 });
            }
        }
        Ok(FreeChainComplex { ring, ranks, differentials })
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// `d_p`, or `None` for `p = 0` and beyond the top degree.
    pub fn differential(&self, p: usize) -> Option<&RingMatrix> {
        p.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    /// The same complex moved up by `k` degrees.
    pub fn shifted(&self, k: usize) -> Self {
        let mut ranks = vec![0; k];
        ranks.extend(&self.ranks);
        let differentials = (1..ranks.len())
            .map(|p| match p.checked_sub(k + 1) {
                Some(old) => self.differentials[old].clone(),
                None => RingMatrix::zeros(self.ring, ranks[p - 1], ranks[p]),
            })
            .collect();
        FreeChainComplex { ring: self.ring, ranks, differentials }
    }

    /// Σ (−1)^p rank(C_p)
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.ranks)
    }
}

/// `rank_F H_p(C ⊗ F)` over the fraction field `F`, for every degree.
pub fn chain_homology_ranks(c: &FreeChainComplex) -> Vec<usize> {
    let diff_ranks: Vec<usize> = c.differentials.iter().map(fraction_field_rank).collect();
    (0..c.ranks.len())
        .map(|p| {
            let rank_out = if p == 0 { 0 } else { diff_ranks[p - 1] };
            let rank_in = diff_ranks.get(p).copied().unwrap_or(0);
            c.ranks[p] - rank_out - rank_in
        })
        .collect()
}

pub(crate) fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(p, &v)| if p % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}
