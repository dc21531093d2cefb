//! Exact linear algebra over Z, Q and rational Laurent polynomial rings.

mod chain;
mod hermite;
mod laurent;
mod matrix;
mod rank;
mod snf;

pub use chain::{chain_homology_ranks, FreeChainComplex};
pub(crate) use chain::alternating_sum;
pub use hermite::{row_echelon, row_space_member, saturation, Echelon};
pub use laurent::{LaurentPoly, RingTag};
pub use matrix::RingMatrix;
pub use rank::{evaluation_rank, fraction_field_rank, generic_point, rational_rank};
pub use snf::{smith_normal_form, SnfResult};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("ring {0:?} is not a principal ideal domain")]
    NotPid(RingTag),
    #[error("invalid ring {0:?}")]
    InvalidRing(RingTag),
    #[error("expected {rows}x{cols} = {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("entry ({row}, {col}) does not belong to {}", ring.name())]
    ForeignEntry { row: usize, col: usize, ring: RingTag },
    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(RingTag, RingTag),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("complex with {degrees} degrees needs {} differentials, got {got}", degrees.saturating_sub(1))]
    DifferentialCount { degrees: usize, got: usize },
    #[error("d_{degree} should be {expected:?}, got {got:?}")]
    DifferentialShape { degree: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("d_{} ∘ d_{degree} is not zero", degree - 1)]
    NotAComplex { degree: usize },
}
