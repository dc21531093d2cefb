//! Extended dimension of finitely generated modules over a principal ideal
//! domain, their torsion/projective splitting, closures of submodules and
//! dimensions of colimits of finite directed chains.
//!
//! All matrices here use the row convention: a presentation with relation
//! matrix `A` (m × n) is the module `Rⁿ / rowspace(A)`, and a map
//! `φ : R^a → R^b` is an a × b matrix acting by `x ↦ x·φ`.

use thiserror::Error;

use crate::linalg::{
    fraction_field_rank, row_space_member, saturation, smith_normal_form, LaurentPoly, LinalgError, RingMatrix, RingTag,
};
use crate::rational::ExtDim;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimError {
    #[error("extended dimension needs a principal ideal domain, got {}", .0.name())]
    NotPid(RingTag),
    #[error("generator {index} has length {got}, expected {expected}")]
    GeneratorLength { index: usize, expected: usize, got: usize },
    #[error("generator {index} has an entry outside {}", ring.name())]
    ForeignGenerator { index: usize, ring: RingTag },
    #[error("directed chain needs at least one map")]
    EmptyChain,
    #[error("map {index} should be {expected:?}, got {got:?}")]
    ChainShape { index: usize, expected: (usize, usize), got: (usize, usize) },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `Rⁿ / rowspace(relations)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FgModulePresentation {
    relations: RingMatrix,
}

impl FgModulePresentation {
    pub fn new(relations: RingMatrix) -> Self {
        FgModulePresentation { relations }
    }

    pub fn free(ring: RingTag, rank: usize) -> Self {
        Self::new(RingMatrix::zeros(ring, 0, rank))
    }

    pub fn ring(&self) -> RingTag {
        self.relations.ring()
    }

    pub fn relations(&self) -> &RingMatrix {
        &self.relations
    }

    pub fn generator_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, DimError> {
        Ok(Self::new(self.relations.block_diag(&other.relations)?))
    }

    fn require_pid(&self) -> Result<(), DimError> {
        if self.ring().is_pid() {
            Ok(())
        } else {
            Err(DimError::NotPid(self.ring()))
        }
    }
}

/// The submodule of `ambient` spanned by the images of `generators`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmoduleSpec {
    ambient: FgModulePresentation,
    generators: Vec<Vec<LaurentPoly>>,
}

impl SubmoduleSpec {
    pub fn new(
        ambient: FgModulePresentation,
        generators: Vec<Vec<LaurentPoly>>,
    ) -> Result<Self, DimError> {
        let n = ambient.generator_count();
        let ring = ambient.ring();
        for (index, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(DimError::GeneratorLength { index, expected: n, got: g.len() });
            }
            if !g.iter().all(|x| ring.contains(x)) {
                return Err(DimError::ForeignGenerator { index, ring });
            }
        }
        Ok(SubmoduleSpec { ambient, generators })
    }

    pub fn ambient(&self) -> &FgModulePresentation {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<LaurentPoly>] {
        &self.generators
    }

    fn generator_matrix(&self) -> RingMatrix {
        let ring = self.ambient.ring();
        if self.generators.is_empty() {
            return RingMatrix::zeros(ring, 0, self.ambient.generator_count());
        }
        RingMatrix::from_rows(ring, self.generators.clone()).expect("validated generators")
    }

    /// Relations of the ambient module stacked over the generators.
    fn stacked(&self) -> RingMatrix {
        self.ambient
            .relations
            .vstack(&self.generator_matrix())
            .expect("same width")
    }
}

/// `dim′(M) = n − rank(A)`: the supremum of ranks of free submodules.
pub fn extended_dimension(m: &FgModulePresentation) -> Result<ExtDim, DimError> {
    m.require_pid()?;
    Ok(ExtDim::from_int(m.generator_count() - fraction_field_rank(&m.relations)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionSplit {
    /// `TM = ⊕ R/(dᵢ)` over the nonzero non-unit invariant factors.
    pub torsion: FgModulePresentation,
    pub invariant_factors: Vec<LaurentPoly>,
    /// Rank of the free part `PM`.
    pub projective_rank: usize,
}

/// `M ≅ PM ⊕ TM` read off the Smith normal form.
pub fn torsion_projective_split(m: &FgModulePresentation) -> Result<TorsionSplit, DimError> {
    m.require_pid()?;
    let snf = smith_normal_form(&m.relations)?;
    let ring = m.ring();
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let invariant_factors: Vec<LaurentPoly> = diag
        .into_iter()
        .filter(|d| !d.is_zero() && !is_unit(ring, d))
        .collect();
    let t = invariant_factors.len();
    let mut rel = RingMatrix::zeros(ring, t, t);
    for (i, d) in invariant_factors.iter().enumerate() {
        rel.set(i, i, d.clone());
    }
    Ok(TorsionSplit {
        torsion: FgModulePresentation::new(rel),
        invariant_factors,
        projective_rank: m.generator_count() - nonzero,
    })
}

fn is_unit(ring: RingTag, d: &LaurentPoly) -> bool {
    match ring {
        RingTag::Integers => d.as_constant().is_some_and(|c| c.numer().magnitude() == &1u32.into()),
        RingTag::Rationals => !d.is_zero(),
        _ => d.num_terms() == 1,
    }
}

/// `dim′` of the submodule `K ⊆ M`: `rank([A; G]) − rank(A)`.
pub fn submodule_dimension(k: &SubmoduleSpec) -> Result<ExtDim, DimError> {
    k.ambient.require_pid()?;
    let total = fraction_field_rank(&k.stacked());
    let base = fraction_field_rank(&k.ambient.relations);
    Ok(ExtDim::from_int(total - base))
}

/// The closure `K̄`: the preimage in `M` of the torsion of `M/K`.
///
/// Returned generators are the Hermite echelon basis of the saturation of
/// `rowspace(A) + span(K)` in `Rⁿ`.
pub fn closure(k: &SubmoduleSpec) -> Result<SubmoduleSpec, DimError> {
    k.ambient.require_pid()?;
    let basis = saturation(&k.stacked())?;
    SubmoduleSpec::new(k.ambient.clone(), basis.to_rows())
}

/// Whether the row vector `v` lies in the row space of `b` over the ring.
pub fn row_space_contains(b: &RingMatrix, v: &[LaurentPoly]) -> Result<bool, DimError> {
    if !b.ring().is_pid() {
        return Err(DimError::NotPid(b.ring()));
    }
    if v.len() != b.cols() {
        return Err(DimError::GeneratorLength { index: 0, expected: b.cols(), got: v.len() });
    }
    Ok(row_space_member(b, v)?)
}

/// Whether `v ∈ Rⁿ` represents an element of `K ⊆ M`.
pub fn submodule_contains(k: &SubmoduleSpec, v: &[LaurentPoly]) -> Result<bool, DimError> {
    row_space_contains(&k.stacked(), v)
}

/// A finite chain `M₀ → M₁ → … → M_L` of free modules; beyond `M_L` the
/// system is taken to be constant.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedChain {
    ring: RingTag,
    modules: Vec<usize>,
    maps: Vec<RingMatrix>,
}

impl DirectedChain {
    pub fn new(ring: RingTag, modules: Vec<usize>, maps: Vec<RingMatrix>) -> Result<Self, DimError> {
        if maps.is_empty() {
            return Err(DimError::EmptyChain);
        }
        if modules.len() != maps.len() + 1 {
            return Err(DimError::ChainShape {
                index: maps.len(),
                expected: (modules.len().saturating_sub(1), 0),
                got: (maps.len(), 0),
            });
        }
        for (index, phi) in maps.iter().enumerate() {
            if phi.ring() != ring {
                return Err(LinalgError::RingMismatch(ring, phi.ring()).into());
            }
            let expected = (modules[index], modules[index + 1]);
            if phi.shape() != expected {
                return Err(DimError::ChainShape { index, expected, got: phi.shape() });
            }
        }
        Ok(DirectedChain { ring, modules, maps })
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn modules(&self) -> &[usize] {
        &self.modules
    }

    pub fn maps(&self) -> &[RingMatrix] {
        &self.maps
    }

    /// `φ_{i,j} = φ_i · φ_{i+1} ⋯ φ_{j−1}`, the identity when `i = j`.
    pub fn composite(&self, i: usize, j: usize) -> RingMatrix {
        let mut acc = RingMatrix::identity(self.ring, self.modules[i]);
        for phi in &self.maps[i..j] {
            acc = acc.mul(phi).expect("validated shapes");
        }
        acc
    }

    /// Presentation of the colimit as the cokernel of the mapping telescope:
    /// generators `⊕ R^{nᵢ}`, relations `eⱼ⁽ⁱ⁾ − φᵢ(eⱼ)⁽ⁱ⁺¹⁾`.
    pub fn telescope(&self) -> FgModulePresentation {
        let offsets: Vec<usize> = self
            .modules
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        let total: usize = self.modules.iter().sum();
        let nrel: usize = self.modules[..self.maps.len()].iter().sum();
        let arity = self.ring.arity();
        let mut rel = RingMatrix::zeros(self.ring, nrel, total);
        let mut r = 0;
        for (i, phi) in self.maps.iter().enumerate() {
            for j in 0..self.modules[i] {
                rel.set(r, offsets[i] + j, LaurentPoly::one(arity));
                for k in 0..self.modules[i + 1] {
                    rel.set(r, offsets[i + 1] + k, phi.get(j, k).neg());
                }
                r += 1;
            }
        }
        FgModulePresentation::new(rel)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColimitDimensions {
    /// `dim′` of the telescope cokernel.
    pub direct: ExtDim,
    /// `supᵢ inf_{j ≥ i} dim(im φ_{i,j})`.
    pub formula: ExtDim,
}

pub fn colimit_dimension(chain: &DirectedChain) -> Result<ColimitDimensions, DimError> {
    if !chain.ring.is_pid() {
        return Err(DimError::NotPid(chain.ring));
    }
    let direct = extended_dimension(&chain.telescope())?;
    let last = chain.modules.len() - 1;
    let formula = (0..=last)
        .map(|i| {
            (i..=last)
                .map(|j| fraction_field_rank(&chain.composite(i, j)))
                .min()
                .expect("nonempty range")
        })
        .max()
        .expect("nonempty chain");
    Ok(ColimitDimensions { direct, formula: ExtDim::from_int(formula) })
}

/// `R^n → R^{n−1} → … → R^0`, each map dropping the first coordinate.
pub fn projection_chain(ring: RingTag, n: usize) -> DirectedChain {
    let arity = ring.arity();
    let maps = (1..=n)
        .rev()
        .map(|k| {
            let mut m = RingMatrix::zeros(ring, k, k - 1);
            for c in 0..k - 1 {
                m.set(c + 1, c, LaurentPoly::one(arity));
            }
            m
        })
        .collect();
    DirectedChain::new(ring, (0..=n).rev().collect(), maps).expect("well-formed projection chain")
}
