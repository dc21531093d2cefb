//! Γ-CW-complexes given by cell orbits, stabilizers and group-ring boundary
//! data, with validation, expansion over finite groups, induction along
//! subgroup inclusions and the L²-Euler characteristic.
//!
//! Boundaries follow the left-module convention: a cell `c` with boundary
//! `[(t, a)]` has `∂c = Σ a·t` and `∂(γc) = γ·∂c`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupElem, GroupError, GroupSpec};
use crate::linalg::{
    alternating_sum, chain_homology_ranks, FreeChainComplex, LaurentPoly, LinalgError, RingMatrix,
    RingTag,
};
use crate::rational::{ExtDim, Rat};

/// Finitely supported `Σ λ_γ γ` with rational coefficients.
pub type GroupRingElem = BTreeMap<GroupElem, Rat>;

pub fn group_ring_mul(
    group: &GroupSpec,
    a: &GroupRingElem,
    b: &GroupRingElem,
) -> Result<GroupRingElem, GroupError> {
    let mut out = GroupRingElem::new();
    for (x, lx) in a {
        for (y, ly) in b {
            add_coefficient(&mut out, group.mul(x, y)?, lx * ly);
        }
    }
    Ok(out)
}

fn add_coefficient<K: Ord>(map: &mut BTreeMap<K, Rat>, key: K, value: Rat) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(value);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += value;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerOrder {
    Finite(usize),
    Infinite,
}

/// The stabilizer `Γ_c` of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    Trivial,
    /// Explicit subgroup of a finite group, as sorted element indices.
    Subgroup(Vec<usize>),
    /// A conjugacy class of subgroups known by label, with its order when
    /// recorded.
    Declared { class: String, order: Option<StabilizerOrder> },
}

impl Stabilizer {
    pub fn order(&self) -> Option<StabilizerOrder> {
        match self {
            Stabilizer::Trivial => Some(StabilizerOrder::Finite(1)),
            Stabilizer::Subgroup(v) => Some(StabilizerOrder::Finite(v.len())),
            Stabilizer::Declared { order, .. } => *order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(StabilizerOrder::Finite(1))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub stabilizer: Stabilizer,
    pub boundary: Vec<(String, GroupRingElem)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, stabilizer: Stabilizer) -> Self {
        Cell { id: id.into(), dim, stabilizer, boundary: Vec::new() }
    }

    pub fn free(id: impl Into<String>, dim: usize) -> Self {
        Self::new(id, dim, Stabilizer::Trivial)
    }

    pub fn with_boundary(mut self, target: impl Into<String>, coefficient: GroupRingElem) -> Self {
        self.boundary.push((target.into(), coefficient));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub cell: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cell {
            Some(c) => write!(f, "cell {c}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, cell: Option<&str>, message: impl Into<String>) {
        self.violations.push(Violation { cell: cell.map(str::to_owned), message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&lines.join("; "))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GcwError {
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("cell {0} has no recorded stabilizer order")]
    UnrecordedStabilizer(String),
    #[error("operation needs a finite group, got {0}")]
    NotFinite(String),
    #[error("operation needs a free abelian group, got {0}")]
    NotFreeAbelian(String),
    #[error("cell {0} needs an explicit stabilizer subgroup")]
    NoSubgroup(String),
    #[error("cell {0} has a nontrivial stabilizer")]
    NontrivialStabilizer(String),
    #[error("boundary of cell {0} leaves the fixed-point set")]
    LeavesFixedSet(String),
    #[error("groups of the two complexes differ")]
    GroupMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaCWComplex {
    group: GroupSpec,
    cells: Vec<Cell>,
    connected: bool,
}

/// A cell `γ·c` of the underlying complex of a finite-group complex,
/// recorded as the cell index and the canonical representative of `γΓ_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlainCell {
    pub cell: usize,
    pub coset: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlainComplex {
    pub chain: FreeChainComplex,
    /// Basis of each chain group.
    pub cells: Vec<Vec<PlainCell>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerCharacteristic {
    /// `χ⁽²⁾ = Σ (−1)^{dim c} |Γ_c|⁻¹`
    pub chi: Rat,
    /// `m(X) = Σ |Γ_c|⁻¹`
    pub mass: ExtDim,
}

pub(crate) type PlainChain = BTreeMap<PlainCell, Rat>;

/// Stabilizers of all cells and the boundary of every plain cell.
pub(crate) type PlainData = (Vec<Vec<usize>>, HashMap<PlainCell, PlainChain>);

impl GammaCWComplex {
    pub fn new(group: GroupSpec, cells: Vec<Cell>, connected: bool) -> Self {
        GammaCWComplex { group, cells, connected }
    }

    pub fn empty(group: GroupSpec) -> Self {
        Self::new(group, Vec::new(), false)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn connected(&self) -> bool {
        self.connected
    }

    /// Highest cell dimension, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    /// Number of cell orbits in each degree.
    pub fn orbit_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.cells {
            counts[c.dim] += 1;
        }
        counts
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_shape(&mut report);
        if !report.is_valid() {
            return report;
        }
        match &self.group {
            GroupSpec::Finite(g) => {
                self.check_finite(g, &mut report);
                if report.is_valid() {
                    self.check_connectivity(g, &mut report);
                }
            }
            GroupSpec::FreeAbelian { .. } | GroupSpec::Free { .. } => {
                self.check_group_ring(&mut report)
            }
            GroupSpec::Declared { .. } => {}
        }
        report
    }

    /// For a finite group, the same complex with the connectivity flag read
    /// off the underlying complex.
    pub fn with_detected_connectivity(mut self) -> Result<Self, GcwError> {
        let GroupSpec::Finite(g) = &self.group else {
            return Err(GcwError::NotFinite(self.group.summary()));
        };
        let mut report = ValidationReport::default();
        self.check_shape(&mut report);
        if report.is_valid() {
            self.check_finite(g, &mut report);
        }
        if !report.is_valid() {
            return Err(GcwError::Invalid(report));
        }
        self.connected = self.component_count(g)? == 1;
        Ok(self)
    }

    pub fn validated(&self) -> Result<(), GcwError> {
        let report = self.validate();
        if report.is_valid() { Ok(()) } else { Err(GcwError::Invalid(report)) }
    }

    fn check_shape(&self, report: &mut ValidationReport) {
        let mut seen = HashSet::new();
        let index: HashMap<&str, &Cell> = self.cells.iter().map(|c| (c.id.as_str(), c)).collect();
        let finite = self.group.as_finite();
        for c in &self.cells {
            let id = Some(c.id.as_str());
            if !seen.insert(c.id.as_str()) {
                report.push(id, "duplicate cell id");
            }
            match (&c.stabilizer, finite) {
                (Stabilizer::Subgroup(v), Some(g)) => {
                    if !g.is_subgroup(v) {
                        report.push(id, format!("stabilizer {v:?} is not a subgroup"));
                    }
                }
                (Stabilizer::Subgroup(_), None) => {
                    report.push(id, "explicit stabilizer subgroups need a finite group")
                }
                (Stabilizer::Declared { class, .. }, Some(_)) => report.push(
                    id,
                    format!("stabilizer class {class} must be resolved to a subgroup of the finite group"),
                ),
                (Stabilizer::Declared { order: Some(StabilizerOrder::Finite(0)), .. }, None) => {
                    report.push(id, "stabilizer of order 0")
                }
                _ => {}
            }
            if c.boundary.is_empty() {
                continue;
            }
            if c.dim == 0 {
                report.push(id, "0-cell with boundary data");
            }
            if matches!(self.group, GroupSpec::Declared { .. }) {
                report.push(id, "boundary data needs a group with element arithmetic");
                continue;
            }
            if finite.is_none() && !c.stabilizer.is_trivial() {
                report.push(id, "boundary data on a cell with nontrivial stabilizer needs a finite group");
            }
            for (target, coefficient) in &c.boundary {
                match index.get(target.as_str()) {
                    None => report.push(id, format!("boundary target {target} does not exist")),
                    Some(t) if t.dim + 1 != c.dim => report.push(
                        id,
                        format!("boundary target {target} has dimension {}, expected {}", t.dim, c.dim as i64 - 1),
                    ),
                    _ => {}
                }
                for x in coefficient.keys() {
                    if let Err(e) = self.group.check(x) {
                        report.push(id, e.to_string());
                    }
                }
            }
        }
    }

    fn stabilizer_subgroup(&self, g: &FiniteGroup, cell: usize) -> Result<Vec<usize>, GcwError> {
        match &self.cells[cell].stabilizer {
            Stabilizer::Trivial => Ok(vec![g.identity()]),
            Stabilizer::Subgroup(v) => Ok(g.subgroup(v)?),
            Stabilizer::Declared { .. } => Err(GcwError::NoSubgroup(self.cells[cell].id.clone())),
        }
    }

    /// `γ·∂c` in plain coordinates.
    fn plain_boundary(
        &self,
        g: &FiniteGroup,
        stabilizers: &[Vec<usize>],
        index: &HashMap<&str, usize>,
        cell: usize,
        gamma: usize,
    ) -> PlainChain {
        let mut out = PlainChain::new();
        for (target, coefficient) in &self.cells[cell].boundary {
            let t = index[target.as_str()];
            for (x, lambda) in coefficient {
                let GroupElem::Finite(x) = x else { unreachable!("checked elements") };
                let coset = g.coset_rep(g.mul(gamma, *x), &stabilizers[t]);
                add_coefficient(&mut out, PlainCell { cell: t, coset }, lambda.clone());
            }
        }
        out
    }

    fn check_finite(&self, g: &FiniteGroup, report: &mut ValidationReport) {
        let stabilizers: Vec<Vec<usize>> = (0..self.cells.len())
            .map(|i| self.stabilizer_subgroup(g, i).expect("shape checked"))
            .collect();
        let index = self.id_index();
        for (i, c) in self.cells.iter().enumerate() {
            let base = self.plain_boundary(g, &stabilizers, &index, i, g.identity());
            if stabilizers[i]
                .iter()
                .any(|&h| self.plain_boundary(g, &stabilizers, &index, i, h) != base)
            {
                report.push(Some(&c.id), "boundary is not invariant under the stabilizer");
            }
        }
        if !report.is_valid() {
            return;
        }
        for (i, c) in self.cells.iter().enumerate() {
            let mut composite = PlainChain::new();
            for (face, lambda) in self.plain_boundary(g, &stabilizers, &index, i, g.identity()) {
                for (x, mu) in self.plain_boundary(g, &stabilizers, &index, face.cell, face.coset) {
                    add_coefficient(&mut composite, x, &lambda * &mu);
                }
            }
            if !composite.is_empty() {
                report.push(Some(&c.id), "composite boundary is not zero");
            }
        }
    }

    fn component_count(&self, g: &FiniteGroup) -> Result<usize, GcwError> {
        let stabilizers: Vec<Vec<usize>> =
            (0..self.cells.len()).map(|i| self.stabilizer_subgroup(g, i)).collect::<Result<_, _>>()?;
        let plain = self.build_plain(g, &stabilizers)?;
        Ok(chain_homology_ranks(&plain.chain).first().copied().unwrap_or(0))
    }

    fn check_connectivity(&self, g: &FiniteGroup, report: &mut ValidationReport) {
        let b0 = self.component_count(g).expect("checked complex");
        if self.connected != (b0 == 1) {
            report.push(
                None,
                format!("declared connected = {} but the underlying complex has {b0} components", self.connected),
            );
        }
    }

    fn check_group_ring(&self, report: &mut ValidationReport) {
        let index = self.id_index();
        for c in &self.cells {
            let mut composite: BTreeMap<usize, GroupRingElem> = BTreeMap::new();
            for (target, a) in &c.boundary {
                for (face, b) in &self.cells[index[target.as_str()]].boundary {
                    let product = group_ring_mul(&self.group, a, b).expect("checked elements");
                    let acc = composite.entry(index[face.as_str()]).or_default();
                    for (x, v) in product {
                        add_coefficient(acc, x, v);
                    }
                }
            }
            if composite.values().any(|v| !v.is_empty()) {
                report.push(Some(&c.id), "composite boundary is not zero");
            }
        }
    }

    /// Stabilizer subgroups of all cells and `γ·∂c` for every plain cell,
    /// keyed by plain cell, for a validated finite-group complex.
    pub(crate) fn plain_data(
        &self,
    ) -> Result<PlainData, GcwError> {
        let GroupSpec::Finite(g) = &self.group else {
            return Err(GcwError::NotFinite(self.group.summary()));
        };
        self.validated()?;
        let stabilizers: Vec<Vec<usize>> =
            (0..self.cells.len()).map(|i| self.stabilizer_subgroup(g, i)).collect::<Result<_, _>>()?;
        let index = self.id_index();
        let mut boundaries = HashMap::new();
        for (i, h) in stabilizers.iter().enumerate() {
            for coset in g.left_cosets(h) {
                let b = self.plain_boundary(g, &stabilizers, &index, i, coset);
                boundaries.insert(PlainCell { cell: i, coset }, b);
            }
        }
        Ok((stabilizers, boundaries))
    }

    fn id_index(&self) -> HashMap<&str, usize> {
        self.cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect()
    }

    fn build_plain(&self, g: &FiniteGroup, stabilizers: &[Vec<usize>]) -> Result<PlainComplex, GcwError> {
        let index = self.id_index();
        let top = self.dimension().map_or(0, |d| d + 1);
        let mut cells: Vec<Vec<PlainCell>> = vec![Vec::new(); top];
        for (i, c) in self.cells.iter().enumerate() {
            for coset in g.left_cosets(&stabilizers[i]) {
                cells[c.dim].push(PlainCell { cell: i, coset });
            }
        }
        let position: Vec<HashMap<PlainCell, usize>> = cells
            .iter()
            .map(|v| v.iter().enumerate().map(|(k, &p)| (p, k)).collect())
            .collect();
        let mut differentials = Vec::new();
        for p in 1..top {
            let mut d = RingMatrix::zeros(RingTag::Rationals, cells[p - 1].len(), cells[p].len());
            for (col, pc) in cells[p].iter().enumerate() {
                for (face, lambda) in self.plain_boundary(g, stabilizers, &index, pc.cell, pc.coset) {
                    d.set(position[p - 1][&face], col, LaurentPoly::constant(0, lambda));
                }
            }
            differentials.push(d);
        }
        let ranks = cells.iter().map(Vec::len).collect();
        let chain = FreeChainComplex::new(RingTag::Rationals, ranks, differentials)?;
        Ok(PlainComplex { chain, cells })
    }

    /// The underlying complex of a finite-group complex: one cell per coset
    /// `γΓ_c`, with `Σ_c [Γ : Γ_c]` cells in each degree.
    pub fn expand_to_plain_complex(&self) -> Result<PlainComplex, GcwError> {
        let GroupSpec::Finite(g) = &self.group else {
            return Err(GcwError::NotFinite(self.group.summary()));
        };
        self.validated()?;
        let stabilizers: Vec<Vec<usize>> =
            (0..self.cells.len()).map(|i| self.stabilizer_subgroup(g, i)).collect::<Result<_, _>>()?;
        self.build_plain(g, &stabilizers)
    }

    /// Cellular chain complex over Q[Zⁿ] = Q[z₁^±1, …, zₙ^±1] of a free
    /// complex over Zⁿ (or over F₁ ≅ Z).
    pub fn laurent_chain_complex(&self) -> Result<FreeChainComplex, GcwError> {
        let rank = match &self.group {
            GroupSpec::FreeAbelian { rank } => *rank,
            GroupSpec::Free { rank: 1 } => 1,
            other => return Err(GcwError::NotFreeAbelian(other.summary())),
        };
        self.validated()?;
        if let Some(c) = self.cells.iter().find(|c| !c.stabilizer.is_trivial()) {
            return Err(GcwError::NontrivialStabilizer(c.id.clone()));
        }
        let ring = if rank == 1 { RingTag::LaurentUni } else { RingTag::LaurentMulti(rank) };
        let top = self.dimension().map_or(0, |d| d + 1);
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top];
        for (i, c) in self.cells.iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        let position: HashMap<usize, usize> = by_dim
            .iter()
            .flat_map(|v| v.iter().enumerate().map(|(k, &i)| (i, k)))
            .collect();
        let index = self.id_index();
        let mut differentials = Vec::new();
        for p in 1..top {
            let mut d = RingMatrix::zeros(ring, by_dim[p - 1].len(), by_dim[p].len());
            for (col, &i) in by_dim[p].iter().enumerate() {
                for (target, coefficient) in &self.cells[i].boundary {
                    let row = position[&index[target.as_str()]];
                    let mut entry = d.get(row, col).clone();
                    for (x, lambda) in coefficient {
                        let exponents = match x {
                            GroupElem::Abelian(v) => v.clone(),
                            GroupElem::Word(w) => vec![w.iter().map(|&l| l.signum() as i64).sum()],
                            GroupElem::Finite(_) => unreachable!("checked elements"),
                        };
                        entry = entry.add(&LaurentPoly::monomial(exponents, lambda.clone()));
                    }
                    d.set(row, col, entry);
                }
            }
            differentials.push(d);
        }
        let ranks = by_dim.iter().map(Vec::len).collect();
        Ok(FreeChainComplex::new(ring, ranks, differentials)?)
    }

    /// `χ⁽²⁾(X) = Σ (−1)^{dim c} |Γ_c|⁻¹` and `m(X) = Σ |Γ_c|⁻¹`, where an
    /// infinite stabilizer contributes 0.
    pub fn l2_euler_characteristic(&self) -> Result<EulerCharacteristic, GcwError> {
        let mut chi = Rat::zero();
        let mut mass = Rat::zero();
        for c in &self.cells {
            let weight = match c.stabilizer.order() {
                Some(StabilizerOrder::Finite(0)) => {
                    let mut report = ValidationReport::default();
                    report.push(Some(&c.id), "stabilizer of order 0");
                    return Err(GcwError::Invalid(report));
                }
                Some(StabilizerOrder::Finite(n)) => Rat::new(1.into(), n.into()),
                Some(StabilizerOrder::Infinite) => Rat::zero(),
                None => return Err(GcwError::UnrecordedStabilizer(c.id.clone())),
            };
            if c.dim % 2 == 0 {
                chi += &weight;
            } else {
                chi -= &weight;
            }
            mass += weight;
        }
        Ok(EulerCharacteristic { chi, mass: ExtDim::Finite(mass) })
    }

    /// Ordinary Euler characteristic of the underlying complex.
    pub fn plain_euler_characteristic(&self) -> Result<i64, GcwError> {
        Ok(alternating_sum(self.expand_to_plain_complex()?.chain.ranks()))
    }

    /// The disjoint union; cells of `other` whose ids clash get primes
    /// appended.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, GcwError> {
        if self.group != other.group {
            return Err(GcwError::GroupMismatch);
        }
        let mut taken: HashSet<String> = self.cells.iter().map(|c| c.id.clone()).collect();
        let mut renamed: HashMap<&str, String> = HashMap::new();
        for c in &other.cells {
            let mut id = c.id.clone();
            while taken.contains(&id) || other.cells.iter().any(|d| d.id == id && d.id != c.id) {
                id.push('\'');
            }
            taken.insert(id.clone());
            renamed.insert(c.id.as_str(), id);
        }
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().map(|c| Cell {
            id: renamed[c.id.as_str()].clone(),
            dim: c.dim,
            stabilizer: c.stabilizer.clone(),
            boundary: c
                .boundary
                .iter()
                .map(|(t, a)| (renamed.get(t.as_str()).cloned().unwrap_or_else(|| t.clone()), a.clone()))
                .collect(),
        }));
        let connected = (self.cells.is_empty() && other.connected) || (other.cells.is_empty() && self.connected);
        Ok(Self::new(self.group.clone(), cells, connected))
    }
}

/// `Γ ×_Δ X` for finite groups `Δ ⊆ Γ`, the inclusion given by `embedding`
/// (`embedding[δ]` is the image of `δ`).
pub fn induce_complex(
    x: &GammaCWComplex,
    target: &FiniteGroup,
    embedding: &[usize],
) -> Result<GammaCWComplex, GcwError> {
    let GroupSpec::Finite(source) = x.group() else {
        return Err(GcwError::NotFinite(x.group().summary()));
    };
    source.check_embedding(target, embedding)?;
    x.validated()?;
    let push = |e: &GroupElem| match e {
        GroupElem::Finite(i) => GroupElem::Finite(embedding[*i]),
        other => other.clone(),
    };
    let cells = x
        .cells()
        .iter()
        .map(|c| Cell {
            id: c.id.clone(),
            dim: c.dim,
            stabilizer: match &c.stabilizer {
                Stabilizer::Subgroup(v) => {
                    let mut w: Vec<usize> = v.iter().map(|&i| embedding[i]).collect();
                    w.sort_unstable();
                    Stabilizer::Subgroup(w)
                }
                other => other.clone(),
            },
            boundary: c
                .boundary
                .iter()
                .map(|(t, a)| (t.clone(), a.iter().map(|(e, v)| (push(e), v.clone())).collect()))
                .collect(),
        })
        .collect();
    let connected = x.connected() && source.order() == target.order();
    Ok(GammaCWComplex::new(GroupSpec::Finite(target.clone()), cells, connected))
}

/// `Σ λ_γ γ` from `(element, coefficient)` pairs.
pub fn group_ring(terms: impl IntoIterator<Item = (GroupElem, Rat)>) -> GroupRingElem {
    let mut out = GroupRingElem::new();
    for (x, v) in terms {
        add_coefficient(&mut out, x, v);
    }
    out
}

/// `γ − 1`
pub fn minus_one(group: &GroupSpec, gamma: GroupElem) -> GroupRingElem {
    let e = group.identity().expect("group with arithmetic");
    group_ring([(gamma, Rat::one()), (e, -Rat::one())])
}

/// The single element `γ` with coefficient 1.
pub fn unit(gamma: GroupElem) -> GroupRingElem {
    group_ring([(gamma, Rat::one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn z_circle() -> GammaCWComplex {
        let g = GroupSpec::free_abelian(1).unwrap();
        let t = GroupElem::Abelian(vec![1]);
        GammaCWComplex::new(
            g.clone(),
            vec![Cell::free("v", 0), Cell::free("e", 1).with_boundary("v", minus_one(&g, t))],
            true,
        )
    }

    fn antipodal_circle() -> GammaCWComplex {
        let g = GroupSpec::Finite(FiniteGroup::cyclic(2));
        GammaCWComplex::new(
            g.clone(),
            vec![
                Cell::free("v", 0),
                Cell::free("e", 1).with_boundary("v", minus_one(&g, GroupElem::Finite(1))),
            ],
            true,
        )
    }

    #[test]
    fn z_circle_is_valid_and_has_zero_euler_characteristic() {
        let x = z_circle();
        assert!(x.validate().is_valid());
        let e = x.l2_euler_characteristic().unwrap();
        assert_eq!(e.chi, Rat::zero());
        assert_eq!(e.mass, ExtDim::from_int(2));
    }

    #[test]
    fn nonzero_composite_boundary_names_the_cell() {
        let g = GroupSpec::free_abelian(1).unwrap();
        let e = GroupElem::Abelian(vec![0]);
        let x = GammaCWComplex::new(
            g,
            vec![
                Cell::free("v", 0),
                Cell::free("a", 1).with_boundary("v", unit(e.clone())),
                Cell::free("f", 2).with_boundary("a", unit(e)),
            ],
            true,
        );
        let report = x.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].cell.as_deref(), Some("f"));
    }

    #[test]
    fn zero_order_stabilizer_is_invalid() {
        let x = GammaCWComplex::new(
            GroupSpec::Declared { name: "G".into() },
            vec![Cell::new(
                "p",
                0,
                Stabilizer::Declared { class: "H".into(), order: Some(StabilizerOrder::Finite(0)) },
            )],
            true,
        );
        assert!(!x.validate().is_valid());
        assert!(x.l2_euler_characteristic().is_err());
    }

    #[test]
    fn orbit_point_with_stabilizer_of_order_six() {
        let g = FiniteGroup::symmetric(3);
        let x = GammaCWComplex::new(
            GroupSpec::Finite(g),
            vec![Cell::new("p", 0, Stabilizer::Subgroup((0..6).collect()))],
            true,
        );
        assert_eq!(x.l2_euler_characteristic().unwrap().chi, rat(1, 6));
        let plain = x.expand_to_plain_complex().unwrap();
        assert_eq!(plain.chain.ranks(), &[1]);
    }

    #[test]
    fn antipodal_circle_expands_to_a_circle() {
        let plain = antipodal_circle().expand_to_plain_complex().unwrap();
        assert_eq!(plain.chain.ranks(), &[2, 2]);
        assert_eq!(chain_homology_ranks(&plain.chain), vec![1, 1]);
    }

    #[test]
    fn trivial_group_expansion_is_the_complex() {
        let g = GroupSpec::Finite(FiniteGroup::trivial());
        let e = GroupElem::Finite(0);
        let x = GammaCWComplex::new(
            g,
            vec![
                Cell::free("v", 0),
                Cell::free("w", 0),
                Cell::free("a", 1)
                    .with_boundary("w", unit(e.clone()))
                    .with_boundary("v", group_ring([(e, -Rat::one())])),
            ],
            true,
        );
        let plain = x.expand_to_plain_complex().unwrap();
        assert_eq!(plain.chain.ranks(), &[2, 1]);
        assert_eq!(chain_homology_ranks(&plain.chain), vec![1, 0]);
    }

    #[test]
    fn connectivity_flag_is_verified_for_finite_groups() {
        let g = GroupSpec::Finite(FiniteGroup::cyclic(2));
        let x = GammaCWComplex::new(g, vec![Cell::free("v", 0)], true);
        assert!(!x.validate().is_valid());
    }

    #[test]
    fn stabilizer_invariance_is_checked() {
        // Z/2 fixing an edge whose endpoints it swaps is not a cell action
        let g = FiniteGroup::cyclic(2);
        let spec = GroupSpec::Finite(g);
        let x = GammaCWComplex::new(
            spec.clone(),
            vec![
                Cell::free("v", 0),
                Cell::new("e", 1, Stabilizer::Subgroup(vec![0, 1])).with_boundary("v", minus_one(&spec, GroupElem::Finite(1))),
            ],
            true,
        );
        let report = x.validate();
        assert_eq!(report.violations[0].message, "boundary is not invariant under the stabilizer");
    }

    #[test]
    fn induction_from_trivial_group_doubles_a_point() {
        let x = GammaCWComplex::new(GroupSpec::Finite(FiniteGroup::trivial()), vec![Cell::free("p", 0)], true);
        let y = induce_complex(&x, &FiniteGroup::cyclic(2), &[0]).unwrap();
        assert_eq!(y.expand_to_plain_complex().unwrap().chain.ranks(), &[2]);
        assert!(!y.connected());
        assert!(induce_complex(&x, &FiniteGroup::cyclic(2), &[1]).is_err());
    }

    #[test]
    fn disjoint_union_adds_euler_characteristics() {
        let x = antipodal_circle();
        let g = x.group().clone();
        let point = GammaCWComplex::new(g, vec![Cell::new("v", 0, Stabilizer::Subgroup(vec![0, 1]))], true);
        let u = x.disjoint_union(&point).unwrap();
        assert!(u.validate().is_valid());
        assert_eq!(
            u.l2_euler_characteristic().unwrap().chi,
            x.l2_euler_characteristic().unwrap().chi + point.l2_euler_characteristic().unwrap().chi
        );
        assert_eq!(u.cells()[2].id, "v'");
    }

    #[test]
    fn empty_complex() {
        let x = GammaCWComplex::empty(GroupSpec::Finite(FiniteGroup::cyclic(3)));
        assert!(x.validate().is_valid());
        assert_eq!(x.l2_euler_characteristic().unwrap().chi, Rat::zero());
    }

    #[test]
    fn torus_laurent_complex() {
        let g = GroupSpec::free_abelian(2).unwrap();
        let z = GroupElem::Abelian(vec![1, 0]);
        let w = GroupElem::Abelian(vec![0, 1]);
        let d2 = minus_one(&g, w.clone());
        let x = GammaCWComplex::new(
            g.clone(),
            vec![
                Cell::free("v", 0),
                Cell::free("a", 1).with_boundary("v", minus_one(&g, z.clone())),
                Cell::free("b", 1).with_boundary("v", minus_one(&g, w.clone())),
                Cell::free("f", 2)
                    .with_boundary("a", d2)
                    .with_boundary("b", group_ring([(z, -Rat::one()), (GroupElem::Abelian(vec![0, 0]), Rat::one())])),
            ],
            true,
        );
        assert!(x.validate().is_valid(), "{}", x.validate());
        let c = x.laurent_chain_complex().unwrap();
        assert_eq!(chain_homology_ranks(&c), vec![0, 0, 0]);
    }
}
