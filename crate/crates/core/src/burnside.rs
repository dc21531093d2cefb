//! Conjugacy classes of finite subgroups, the Burnside group and its
//! L²-character maps, the fixed-point complexes `X^K`, integrality
//! conditions, and the Hattori–Stallings rank.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gcw::{
    group_ring_mul, Cell, GammaCWComplex, GcwError, GroupRingElem, PlainCell, Stabilizer,
    StabilizerOrder,
};
use crate::group::{FiniteGroup, GroupElem, GroupSpec};
use crate::rational::{is_integer, Rat};

pub const DEFAULT_MAX_ORDER: usize = 120;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BurnsideError {
    #[error("group order {order} exceeds the bound {bound}")]
    OrderBound { order: usize, bound: usize },
    #[error("character value ch_{k}(Γ/{h}): formula gives {formula}, fixed points give {fixed}")]
    CharacterMismatch { k: String, h: String, formula: Box<Rat>, fixed: Box<Rat> },
    #[error("unknown subgroup class {0}")]
    UnknownClass(String),
    #[error("duplicate subgroup class {0}")]
    DuplicateClass(String),
    #[error("class {0} has order 0")]
    ZeroOrder(String),
    #[error("character value ch_{0}(Γ/{0}) must be 1, got {1}")]
    DiagonalNotOne(String, Rat),
    #[error("character value ch_{0}(Γ/{1}) must be 0 since {0} is not subconjugate to {1}")]
    NotSubconjugate(String, String),
    #[error("subconjugacy {0} ≤ {1} needs |{0}| ≤ |{1}|")]
    SubconjugacyOrder(String, String),
    #[error("character value ch_{0}(Γ/{1}) is missing")]
    MissingCharacter(String, String),
    #[error("cell {0} has a stabilizer that matches no class of the table")]
    UnknownStabilizer(String),
    #[error("the table has no class of the trivial subgroup")]
    NoTrivialClass,
    #[error("vector has length {got}, the table has {expected} classes")]
    Length { expected: usize, got: usize },
    #[error("table was not computed from a finite group")]
    NoLattice,
    #[error("lattice rank n must be at least 1")]
    ZeroRank,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("Hattori–Stallings rank needs a finite or free abelian group, got {0}")]
    UnsupportedGroup(String),
    #[error(transparent)]
    Complex(#[from] GcwError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ComputedFromFiniteGroup,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub id: String,
    pub order: usize,
    /// `|WK| = |NK / K|`.
    pub weyl_order: StabilizerOrder,
}

/// Subgroups of a finite group grouped into conjugacy classes, aligned with
/// the classes of the table.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupLattice {
    pub group: FiniteGroup,
    /// Members of each class, sorted; the first is the representative.
    pub members: Vec<Vec<Vec<usize>>>,
}

impl SubgroupLattice {
    pub fn representative(&self, class: usize) -> &[usize] {
        &self.members[class][0]
    }

    pub fn class_of(&self, subgroup: &[usize]) -> Option<usize> {
        let mut s = subgroup.to_vec();
        s.sort_unstable();
        s.dedup();
        self.members.iter().position(|m| m.binary_search(&s).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSubgroupTable {
    classes: Vec<SubgroupClass>,
    /// `sub[i][j]`: class `i` is subconjugate to class `j`.
    sub: Vec<Vec<bool>>,
    /// `character[k][h] = ch_K(Γ/H)`.
    character: Vec<Vec<Rat>>,
    provenance: Provenance,
    lattice: Option<SubgroupLattice>,
}

/// Canonical order: non-decreasing subgroup order, then shorter ids, then
/// lexicographic ids.
fn class_order(a: &SubgroupClass, b: &SubgroupClass) -> Ordering {
    (a.order, a.id.len(), &a.id).cmp(&(b.order, b.id.len(), &b.id))
}

impl FiniteSubgroupTable {
    /// A table given by hand. Classes are put in canonical order; the
    /// subconjugacy relation is closed reflexively and transitively.
    pub fn user_supplied(
        classes: Vec<SubgroupClass>,
        subconjugacy: &[(String, String)],
        character: &[(String, String, Rat)],
    ) -> Result<Self, BurnsideError> {
        let mut classes = classes;
        classes.sort_by(class_order);
        let mut seen = HashSet::new();
        for c in &classes {
            if !seen.insert(c.id.as_str()) {
                return Err(BurnsideError::DuplicateClass(c.id.clone()));
            }
            if c.order == 0 || c.weyl_order == StabilizerOrder::Finite(0) {
                return Err(BurnsideError::ZeroOrder(c.id.clone()));
            }
        }
        let n = classes.len();
        let pos: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
        let find = |id: &str| pos.get(id).copied().ok_or_else(|| BurnsideError::UnknownClass(id.to_owned()));
        let mut sub = vec![vec![false; n]; n];
        for (i, row) in sub.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in subconjugacy {
            let (i, j) = (find(lo)?, find(hi)?);
            if classes[i].order > classes[j].order || (classes[i].order == classes[j].order && i != j) {
                return Err(BurnsideError::SubconjugacyOrder(lo.clone(), hi.clone()));
            }
            sub[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if sub[i][k] && sub[k][j] {
                        sub[i][j] = true;
                    }
                }
            }
        }
        let mut given: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
        for (k, h, v) in character {
            given[find(k)?][find(h)?] = Some(v.clone());
        }
        let mut values = vec![vec![Rat::zero(); n]; n];
        for k in 0..n {
            for h in 0..n {
                let (kid, hid) = (classes[k].id.clone(), classes[h].id.clone());
                values[k][h] = match (&given[k][h], k == h, sub[k][h]) {
                    (Some(v), true, _) if !v.is_one() => return Err(BurnsideError::DiagonalNotOne(kid, v.clone())),
                    (_, true, _) => Rat::one(),
                    (Some(v), false, false) if !v.is_zero() => return Err(BurnsideError::NotSubconjugate(kid, hid)),
                    (_, false, false) => Rat::zero(),
                    (Some(v), false, true) => v.clone(),
                    (None, false, true) => return Err(BurnsideError::MissingCharacter(kid, hid)),
                };
            }
        }
        Ok(FiniteSubgroupTable { classes, sub, character: values, provenance: Provenance::UserSupplied, lattice: None })
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn lattice(&self) -> Option<&SubgroupLattice> {
        self.lattice.as_ref()
    }

    pub fn class_index(&self, id: &str) -> Result<usize, BurnsideError> {
        self.classes.iter().position(|c| c.id == id).ok_or_else(|| BurnsideError::UnknownClass(id.to_owned()))
    }

    pub fn is_subconjugate(&self, k: usize, h: usize) -> bool {
        self.sub[k][h]
    }

    /// Pairs `(lo, hi)` with `lo ≠ hi` and `lo` subconjugate to `hi`.
    pub fn subconjugacy_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && self.sub[i][j]).collect()
    }

    /// The matrix `A[K][H] = ch_K(Γ/H)` in canonical class order.
    pub fn character_matrix(&self) -> &[Vec<Rat>] {
        &self.character
    }

    pub fn trivial_class(&self) -> Result<usize, BurnsideError> {
        self.classes.iter().position(|c| c.order == 1).ok_or(BurnsideError::NoTrivialClass)
    }
}

/// All subgroups of `g` with a generating set for each, trivial first.
fn all_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let trivial = vec![g.identity()];
    let mut found: HashSet<Vec<usize>> = HashSet::from([trivial.clone()]);
    let mut out = vec![trivial.clone()];
    let mut queue = vec![(trivial, Vec::new())];
    while let Some((h, gens)) = queue.pop() {
        for x in 0..g.order() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut more: Vec<usize> = gens.clone();
            more.push(x);
            let k = g.generate(&more);
            if found.insert(k.clone()) {
                out.push(k.clone());
                queue.push((k, more));
            }
        }
    }
    out
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

fn ratio(n: usize, d: usize) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `ch_K(Γ/H) = Σ_{L} |K| / |H ∩ NL|`, over `H`-conjugacy classes of
/// subgroups `L ⊆ H` conjugate to `K` in `Γ`.
fn character_by_formula(g: &FiniteGroup, k_class: &[Vec<usize>], h: &[usize]) -> Rat {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut total = Rat::zero();
    for l in k_class.iter().filter(|l| is_subset(l, h)) {
        if seen.contains(l) {
            continue;
        }
        for &x in h {
            seen.insert(g.conjugate_subgroup(l, x));
        }
        total += ratio(l.len(), intersection_size(h, &g.normalizer(l)));
    }
    total
}

/// `|WK|⁻¹ · |(Γ/H)^K|` with `(Γ/H)^K = {γH : γ⁻¹Kγ ⊆ H}`.
fn character_by_fixed_points(g: &FiniteGroup, k: &[usize], h: &[usize]) -> Rat {
    let fixed = g
        .left_cosets(h)
        .into_iter()
        .filter(|&c| k.iter().all(|&x| h.binary_search(&g.conjugate(x, g.inv(c))).is_ok()))
        .count();
    let weyl = g.normalizer(k).len() / k.len();
    ratio(fixed, weyl)
}

/// Conjugacy classes of subgroups of a finite group of order at most
/// `max_order`, with Weyl group orders and the character matrix, the latter
/// evaluated both by the orbit formula and by counting fixed cosets.
pub fn subgroup_lattice(g: &FiniteGroup, max_order: usize) -> Result<FiniteSubgroupTable, BurnsideError> {
    if g.order() > max_order {
        return Err(BurnsideError::OrderBound { order: g.order(), bound: max_order });
    }
    let subgroups = all_subgroups(g);
    let mut assigned: HashSet<Vec<usize>> = HashSet::new();
    let mut members: Vec<Vec<Vec<usize>>> = Vec::new();
    for h in &subgroups {
        if assigned.contains(h) {
            continue;
        }
        let mut class: Vec<Vec<usize>> = (0..g.order()).map(|x| g.conjugate_subgroup(h, x)).collect();
        class.sort();
        class.dedup();
        assigned.extend(class.iter().cloned());
        members.push(class);
    }
    members.sort_by(|a, b| (a[0].len(), &a[0]).cmp(&(b[0].len(), &b[0])));

    let mut classes = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        let order = m[0].len();
        let same: Vec<usize> = (0..members.len()).filter(|&j| members[j][0].len() == order).collect();
        let id = if same.len() == 1 {
            order.to_string()
        } else {
            let k = same.iter().position(|&j| j == i).unwrap();
            format!("{order}{}", suffix(k))
        };
        let weyl = g.normalizer(&m[0]).len() / order;
        classes.push(SubgroupClass { id, order, weyl_order: StabilizerOrder::Finite(weyl) });
    }

    let n = members.len();
    let mut sub = vec![vec![false; n]; n];
    let mut character = vec![vec![Rat::zero(); n]; n];
    for k in 0..n {
        for h in 0..n {
            let rep_h = &members[h][0];
            sub[k][h] = members[k].iter().any(|l| is_subset(l, rep_h));
            let formula = character_by_formula(g, &members[k], rep_h);
            let fixed = character_by_fixed_points(g, &members[k][0], rep_h);
            if formula != fixed {
                return Err(BurnsideError::CharacterMismatch {
                    k: classes[k].id.clone(),
                    h: classes[h].id.clone(),
                    formula: Box::new(formula),
                    fixed: Box::new(fixed),
                });
            }
            character[k][h] = formula;
        }
    }
    Ok(FiniteSubgroupTable {
        classes,
        sub,
        character,
        provenance: Provenance::ComputedFromFiniteGroup,
        lattice: Some(SubgroupLattice { group: g.clone(), members }),
    })
}

fn suffix(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

/// Both evaluations of `ch_K(Γ/H)` for classes of a computed table:
/// `(orbit formula, fixed-coset count)`.
pub fn character_value_evaluations(
    table: &FiniteSubgroupTable,
    k: usize,
    h: usize,
) -> Result<(Rat, Rat), BurnsideError> {
    let lattice = table.lattice.as_ref().ok_or(BurnsideError::NoLattice)?;
    let g = &lattice.group;
    Ok((
        character_by_formula(g, &lattice.members[k], lattice.representative(h)),
        character_by_fixed_points(g, lattice.representative(k), lattice.representative(h)),
    ))
}

/// `ch_K(Γ/H)` for class ids `k`, `h`.
pub fn character_value(table: &FiniteSubgroupTable, k: &str, h: &str) -> Result<Rat, BurnsideError> {
    let (i, j) = (table.class_index(k)?, table.class_index(h)?);
    Ok(table.character[i][j].clone())
}

/// An element `Σ a_H [Γ/H]` of the Burnside group, tensored with Q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BurnsideElement {
    pub coefficients: BTreeMap<String, Rat>,
}

impl BurnsideElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn orbit(class: &str) -> Self {
        let mut e = Self::new();
        e.add(class, Rat::one());
        e
    }

    pub fn add(&mut self, class: &str, value: Rat) {
        let entry = self.coefficients.entry(class.to_owned()).or_insert_with(Rat::zero);
        *entry += value;
        if entry.is_zero() {
            self.coefficients.remove(class);
        }
    }

    pub fn get(&self, class: &str) -> Rat {
        self.coefficients.get(class).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.values().all(is_integer)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coefficients {
            out.add(k, v.clone());
        }
        out
    }

    /// Coefficients in the canonical class order of `table`.
    pub fn to_vector(&self, table: &FiniteSubgroupTable) -> Result<Vec<Rat>, BurnsideError> {
        for k in self.coefficients.keys() {
            table.class_index(k)?;
        }
        Ok(table.classes.iter().map(|c| self.get(&c.id)).collect())
    }

    pub fn from_vector(table: &FiniteSubgroupTable, v: &[Rat]) -> Self {
        let mut e = Self::new();
        for (c, x) in table.classes.iter().zip(v) {
            e.add(&c.id, x.clone());
        }
        e
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.coefficients.iter().map(|(k, v)| format!("{v}·[Γ/{k}]")).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Table class of a cell stabilizer.
pub fn stabilizer_class(table: &FiniteSubgroupTable, cell: &Cell) -> Result<usize, BurnsideError> {
    match &cell.stabilizer {
        Stabilizer::Trivial => table.trivial_class(),
        Stabilizer::Subgroup(v) => table
            .lattice
            .as_ref()
            .and_then(|l| l.class_of(v))
            .ok_or_else(|| BurnsideError::UnknownStabilizer(cell.id.clone())),
        Stabilizer::Declared { class, .. } => {
            table.class_index(class).map_err(|_| BurnsideError::UnknownStabilizer(cell.id.clone()))
        }
    }
}

/// `χ^Γ(X) = Σ_c (−1)^{dim c} [Γ/Γ_c]`.
pub fn equivariant_euler(x: &GammaCWComplex, table: &FiniteSubgroupTable) -> Result<BurnsideElement, BurnsideError> {
    let mut e = BurnsideElement::new();
    for c in x.cells() {
        let k = stabilizer_class(table, c)?;
        let sign = if c.dim % 2 == 0 { Rat::one() } else { -Rat::one() };
        e.add(&table.classes[k].id, sign);
    }
    Ok(e)
}

/// `η_K = Σ_H a_H · ch_K(Γ/H)` in canonical class order.
pub fn global_character(table: &FiniteSubgroupTable, a: &BurnsideElement) -> Result<Vec<Rat>, BurnsideError> {
    let v = a.to_vector(table)?;
    Ok(table
        .character
        .iter()
        .map(|row| row.iter().zip(&v).fold(Rat::zero(), |acc, (c, x)| acc + c * x))
        .collect())
}

/// `Σ_H a_H / |H|`, the L²-Euler characteristic of an element.
pub fn l2_euler_of_element(table: &FiniteSubgroupTable, a: &BurnsideElement) -> Result<Rat, BurnsideError> {
    let v = a.to_vector(table)?;
    Ok(table.classes.iter().zip(&v).fold(Rat::zero(), |acc, (c, x)| acc + x / Rat::from_integer(c.order.into())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCondition {
    /// e.g. `η₀ − (1/3)Σηᵢ ∈ Z`
    pub text: String,
    /// Index range of `i` when the text contains a grouped sum or stands
    /// for a family of conditions.
    pub range: Option<(usize, usize)>,
}

impl fmt::Display for IntegralityCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.range {
            Some((a, b)) => write!(f, "{} (i = {a}..{b})", self.text),
            None => f.write_str(&self.text),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityReport {
    pub pass: bool,
    /// `ξ = A⁻¹η`.
    pub preimage: Vec<Rat>,
    /// Class ids whose `ξ` entry is not an integer.
    pub witnesses: Vec<String>,
}

/// Solves `Aξ = η` by back-substitution; passes iff `ξ` is integral.
pub fn integrality_conditions(table: &FiniteSubgroupTable, eta: &[Rat]) -> Result<IntegralityReport, BurnsideError> {
    let n = table.len();
    if eta.len() != n {
        return Err(BurnsideError::Length { expected: n, got: eta.len() });
    }
    let a = &table.character;
    let mut xi = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut v = eta[i].clone();
        for j in i + 1..n {
            v -= &a[i][j] * &xi[j];
        }
        xi[i] = v;
    }
    let witnesses: Vec<String> =
        xi.iter().zip(&table.classes).filter(|(x, _)| !is_integer(x)).map(|(_, c)| c.id.clone()).collect();
    Ok(IntegralityReport { pass: witnesses.is_empty(), preimage: xi, witnesses })
}

/// `A⁻¹` for the unit upper-triangular character matrix.
#[allow(clippy::needless_range_loop)]
pub fn inverse_character_matrix(table: &FiniteSubgroupTable) -> Vec<Vec<Rat>> {
    let n = table.len();
    let a = &table.character;
    let mut b = vec![vec![Rat::zero(); n]; n];
    for col in 0..n {
        for i in (0..=col).rev() {
            let mut v = if i == col { Rat::one() } else { Rat::zero() };
            for j in i + 1..=col {
                v -= &a[i][j] * &b[j][col];
            }
            b[i][col] = v;
        }
    }
    b
}

fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

fn coefficient_text(c: &Rat) -> String {
    let m = c.abs();
    if m.is_one() {
        String::new()
    } else if is_integer(&m) {
        m.to_string()
    } else {
        format!("({m})")
    }
}

/// The conditions `(A⁻¹η)_K ∈ Z`, one per row, with runs of equal
/// coefficients written as a sum over `i` and runs of rows reading
/// `η_j ∈ Z` merged into one family.
pub fn integrality_condition_texts(table: &FiniteSubgroupTable) -> Vec<IntegralityCondition> {
    let b = inverse_character_matrix(table);
    let n = table.len();
    let mut out: Vec<IntegralityCondition> = Vec::new();
    let mut unit_run: Option<(usize, usize)> = None;
    let flush = |run: &mut Option<(usize, usize)>, out: &mut Vec<IntegralityCondition>| {
        if let Some((a, z)) = run.take() {
            out.push(if a == z {
                IntegralityCondition { text: format!("η{} ∈ Z", subscript(a)), range: None }
            } else {
                IntegralityCondition { text: "ηᵢ ∈ Z".into(), range: Some((a, z)) }
            });
        }
    };
    for (i, row) in b.iter().enumerate() {
        let support: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
        if support == [i] {
            unit_run = match unit_run {
                Some((a, z)) if z + 1 == i => Some((a, i)),
                other => {
                    let mut r = other;
                    flush(&mut r, &mut out);
                    Some((i, i))
                }
            };
            continue;
        }
        flush(&mut unit_run, &mut out);
        let mut text = String::new();
        let mut range = None;
        let mut k = 0;
        while k < support.len() {
            let j = support[k];
            let c = &row[j];
            let mut end = k;
            while end + 1 < support.len() && support[end + 1] == support[end] + 1 && row[support[end + 1]] == *c {
                end += 1;
            }
            let grouped = end > k && range.is_none();
            let sign = if c.is_negative() { "−" } else { "+" };
            if text.is_empty() {
                if c.is_negative() {
                    text.push('−');
                }
            } else {
                text.push_str(&format!(" {sign} "));
            }
            text.push_str(&coefficient_text(c));
            if grouped {
                text.push_str("Σηᵢ");
                range = Some((j, support[end]));
                k = end + 1;
            } else {
                text.push_str(&format!("η{}", subscript(j)));
                k += 1;
            }
        }
        text.push_str(" ∈ Z");
        out.push(IntegralityCondition { text, range });
    }
    flush(&mut unit_run, &mut out);
    out
}

/// Weyl group `WK = NK/K` as a table on the sorted coset representatives,
/// together with those representatives.
pub fn weyl_group(g: &FiniteGroup, k: &[usize]) -> Result<(FiniteGroup, Vec<usize>), BurnsideError> {
    let k = g.subgroup(k)?;
    let nk = g.normalizer(&k);
    let mut reps: Vec<usize> = nk.iter().map(|&n| g.coset_rep(n, &k)).collect();
    reps.sort_unstable();
    reps.dedup();
    let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let table = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| pos[&g.coset_rep(g.mul(a, b), &k)]).collect())
        .collect();
    let names = reps.iter().map(|&r| format!("{}K", g.name(r))).collect();
    Ok((FiniteGroup::new(table, Some(names))?, reps))
}

/// `X^K` as a complex over `WK`, for an explicit subgroup `k` of the finite
/// group of `x`.
pub fn fixed_point_complex_of(x: &GammaCWComplex, k: &[usize]) -> Result<GammaCWComplex, BurnsideError> {
    let GroupSpec::Finite(g) = x.group() else {
        return Err(GcwError::NotFinite(x.group().summary()).into());
    };
    let k = g.subgroup(k)?;
    let (wk, reps) = weyl_group(g, &k)?;
    let (stabilizers, boundaries) = x.plain_data()?;
    let is_fixed = |p: &PlainCell| {
        let h = &stabilizers[p.cell];
        k.iter().all(|&y| h.binary_search(&g.conjugate(y, g.inv(p.coset))).is_ok())
    };
    let act = |w: usize, p: &PlainCell| PlainCell { cell: p.cell, coset: g.coset_rep(g.mul(reps[w], p.coset), &stabilizers[p.cell]) };

    // orbit representative and the element carrying it to each fixed cell
    let mut orbit_of: HashMap<PlainCell, (usize, usize)> = HashMap::new();
    let mut orbits: Vec<(PlainCell, Vec<usize>)> = Vec::new();
    for (i, h) in stabilizers.iter().enumerate() {
        for coset in g.left_cosets(h) {
            let p = PlainCell { cell: i, coset };
            if !is_fixed(&p) || orbit_of.contains_key(&p) {
                continue;
            }
            let id = orbits.len();
            let mut stab = Vec::new();
            for w in 0..wk.order() {
                let q = act(w, &p);
                if q == p {
                    stab.push(w);
                }
                orbit_of.entry(q).or_insert((id, w));
            }
            orbits.push((p, stab));
        }
    }
    let mut per_cell: HashMap<usize, usize> = HashMap::new();
    for (p, _) in &orbits {
        *per_cell.entry(p.cell).or_default() += 1;
    }
    let mut seen_per_cell: HashMap<usize, usize> = HashMap::new();
    let ids: Vec<String> = orbits
        .iter()
        .map(|(p, _)| {
            let id = &x.cells()[p.cell].id;
            let k = seen_per_cell.entry(p.cell).or_default();
            *k += 1;
            if per_cell[&p.cell] == 1 { id.clone() } else { format!("{id}.{k}") }
        })
        .collect();
    let mut cells = Vec::with_capacity(orbits.len());
    for (n, (p, stab)) in orbits.iter().enumerate() {
        let original = &x.cells()[p.cell];
        let mut boundary: BTreeMap<usize, GroupRingElem> = BTreeMap::new();
        for (face, lambda) in &boundaries[p] {
            let &(orbit, w) = orbit_of.get(face).ok_or_else(|| GcwError::LeavesFixedSet(original.id.clone()))?;
            let entry = boundary.entry(orbit).or_default().entry(GroupElem::Finite(w)).or_insert_with(Rat::zero);
            *entry += lambda;
        }
        let stabilizer = if stab.len() == 1 { Stabilizer::Trivial } else { Stabilizer::Subgroup(stab.clone()) };
        let mut cell = Cell::new(ids[n].clone(), original.dim, stabilizer);
        for (orbit, mut coefficient) in boundary {
            coefficient.retain(|_, v| !v.is_zero());
            if !coefficient.is_empty() {
                cell.boundary.push((ids[orbit].clone(), coefficient));
            }
        }
        cells.push(cell);
    }
    Ok(GammaCWComplex::new(GroupSpec::Finite(wk), cells, false).with_detected_connectivity()?)
}

/// `X^K` for the class `k` of a computed table.
pub fn fixed_point_complex(
    x: &GammaCWComplex,
    table: &FiniteSubgroupTable,
    k: &str,
) -> Result<GammaCWComplex, BurnsideError> {
    let lattice = table.lattice.as_ref().ok_or(BurnsideError::NoLattice)?;
    let rep = lattice.representative(table.class_index(k)?).to_vec();
    fixed_point_complex_of(x, &rep)
}

/// Output of [`example9_table`].
#[derive(Clone, Debug, PartialEq)]
pub struct Example9 {
    pub table: FiniteSubgroupTable,
    /// `χ^Γ(E(Γ, FIN)) = −(r/p)[Γ/H₀] + Σᵢ [Γ/Hᵢ]`
    pub element: BurnsideElement,
    pub global_character: Vec<Rat>,
    pub l2_euler: Rat,
    pub conditions: Vec<IntegralityCondition>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Subgroup data of `Zⁿ ⋊ Z/p` with `r` conjugacy classes of subgroups of
/// order `p`, each with trivial Weyl group, and the equivariant Euler
/// characteristic of its classifying space for proper actions.
pub fn example9_table(n: usize, p: u64, r: usize) -> Result<Example9, BurnsideError> {
    if !is_prime(p) {
        return Err(BurnsideError::NotPrime(p));
    }
    if n == 0 {
        return Err(BurnsideError::ZeroRank);
    }
    let p_us = p as usize;
    let mut classes = vec![SubgroupClass { id: "H0".into(), order: 1, weyl_order: StabilizerOrder::Infinite }];
    let mut sub = Vec::new();
    let mut character = Vec::new();
    for i in 1..=r {
        let id = format!("H{i}");
        classes.push(SubgroupClass { id: id.clone(), order: p_us, weyl_order: StabilizerOrder::Finite(1) });
        sub.push(("H0".to_owned(), id.clone()));
        character.push(("H0".to_owned(), id, ratio(1, p_us)));
    }
    let table = FiniteSubgroupTable::user_supplied(classes, &sub, &character)?;
    let mut element = BurnsideElement::new();
    element.add("H0", -ratio(r, p_us));
    for i in 1..=r {
        element.add(&format!("H{i}"), Rat::one());
    }
    let global_character = global_character(&table, &element)?;
    let l2_euler = l2_euler_of_element(&table, &element)?;
    let mut conditions = integrality_condition_texts(&table);
    if r == 1 {
        // the family H₁, …, H_r keeps its summed form
        conditions[0] = IntegralityCondition { text: format!("η₀ − (1/{p})Σηᵢ ∈ Z"), range: Some((1, 1)) };
    }
    Ok(Example9 { table, element, global_character, l2_euler, conditions })
}

/// The real line with `Z ⋊ Z/2` acting by reflections: two vertex orbits
/// with stabilizers of order 2 and one free edge orbit, over the subgroup
/// data of `example9_table(1, 2, 2)`.
pub fn infinite_dihedral_line() -> GammaCWComplex {
    let reflection = |class: &str| Stabilizer::Declared { class: class.into(), order: Some(StabilizerOrder::Finite(2)) };
    GammaCWComplex::new(
        GroupSpec::Declared { name: "Z ⋊ Z/2".into() },
        vec![Cell::new("v1", 0, reflection("H1")), Cell::new("v2", 0, reflection("H2")), Cell::free("e", 1)],
        true,
    )
}

/// A class function: a value for each conjugacy class of elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassFunction {
    /// `(class label, value)` in class order.
    pub values: Vec<(String, Rat)>,
}

impl ClassFunction {
    pub fn get(&self, label: &str) -> Rat {
        self.values.iter().find(|(l, _)| l == label).map(|(_, v)| v.clone()).unwrap_or_else(Rat::zero)
    }
}

/// `HS(P) = Σ_i A_ii` projected onto conjugacy classes, for an idempotent
/// matrix `A` over `Q[Γ]`.
pub fn hattori_stallings(group: &GroupSpec, a: &[Vec<GroupRingElem>]) -> Result<ClassFunction, BurnsideError> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(BurnsideError::NotSquare);
    }
    if !matches!(group, GroupSpec::Finite(_) | GroupSpec::FreeAbelian { .. }) {
        return Err(BurnsideError::UnsupportedGroup(group.summary()));
    }
    for row in a {
        for (j, entry) in row.iter().enumerate() {
            let mut square = GroupRingElem::new();
            for (k, left) in row.iter().enumerate() {
                for (x, v) in group_ring_mul(group, left, &a[k][j])? {
                    *square.entry(x).or_insert_with(Rat::zero) += v;
                }
            }
            square.retain(|_, v| !v.is_zero());
            let mut expected = entry.clone();
            expected.retain(|_, v| !v.is_zero());
            if square != expected {
                return Err(BurnsideError::NotIdempotent);
            }
        }
    }
    let mut trace = GroupRingElem::new();
    for (i, row) in a.iter().enumerate() {
        for (x, v) in &row[i] {
            *trace.entry(x.clone()).or_insert_with(Rat::zero) += v;
        }
    }
    let values = match group {
        GroupSpec::Finite(g) => g
            .conjugacy_classes()
            .into_iter()
            .map(|class| {
                let total = class
                    .iter()
                    .map(|&x| trace.get(&GroupElem::Finite(x)).cloned().unwrap_or_else(Rat::zero))
                    .fold(Rat::zero(), |acc, v| acc + v);
                (format!("({})", g.name(class[0])), total)
            })
            .collect(),
        _ => trace.into_iter().filter(|(_, v)| !v.is_zero()).map(|(x, v)| (format!("({x})"), v)).collect(),
    };
    Ok(ClassFunction { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcw::{minus_one, unit};
    use crate::rational::{int, rat};

    fn ids(t: &FiniteSubgroupTable) -> Vec<&str> {
        t.classes().iter().map(|c| c.id.as_str()).collect()
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(subgroup_lattice(&FiniteGroup::trivial(), 120).unwrap().len(), 1);
        let z4 = subgroup_lattice(&FiniteGroup::cyclic(4), 120).unwrap();
        assert_eq!(ids(&z4), vec!["1", "2", "4"]);
        let s3 = subgroup_lattice(&FiniteGroup::symmetric(3), 120).unwrap();
        assert_eq!(s3.classes().iter().map(|c| c.order).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
        assert_eq!(subgroup_lattice(&FiniteGroup::dihedral(4), 120).unwrap().len(), 8);
        assert_eq!(subgroup_lattice(&FiniteGroup::alternating(4), 120).unwrap().len(), 5);
        assert_eq!(subgroup_lattice(&FiniteGroup::symmetric(4), 120).unwrap().len(), 11);
    }

    #[test]
    fn order_bound() {
        assert_eq!(
            subgroup_lattice(&FiniteGroup::cyclic(8), 6),
            Err(BurnsideError::OrderBound { order: 8, bound: 6 })
        );
    }

    #[test]
    fn character_values() {
        let s3 = subgroup_lattice(&FiniteGroup::symmetric(3), 120).unwrap();
        for h in ["1", "2", "3", "6"] {
            let order = s3.classes()[s3.class_index(h).unwrap()].order as i64;
            assert_eq!(character_value(&s3, "1", h).unwrap(), rat(1, order));
            assert_eq!(character_value(&s3, h, h).unwrap(), int(1));
        }
        assert_eq!(character_value(&s3, "2", "3").unwrap(), int(0));
        let (f, x) = character_value_evaluations(&s3, 1, 1).unwrap();
        assert_eq!((f, x), (int(1), int(1)));
    }

    #[test]
    fn global_character_of_free_orbit() {
        let z5 = subgroup_lattice(&FiniteGroup::cyclic(5), 120).unwrap();
        let eta = global_character(&z5, &BurnsideElement::orbit("1")).unwrap();
        assert_eq!(eta, vec![int(1), int(0)]);
        assert_eq!(global_character(&z5, &BurnsideElement::new()).unwrap(), vec![int(0), int(0)]);
        let r = integrality_conditions(&z5, &eta).unwrap();
        assert!(r.pass);
        assert_eq!(r.preimage, vec![int(1), int(0)]);
        let bad = integrality_conditions(&z5, &[rat(1, 5), int(0)]).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.preimage[0], rat(1, 5));
        assert_eq!(bad.witnesses, vec!["1".to_owned()]);
    }

    #[test]
    fn example9_values() {
        let e = example9_table(1, 2, 2).unwrap();
        assert_eq!(e.element.to_vector(&e.table).unwrap(), vec![int(-1), int(1), int(1)]);
        assert_eq!(e.global_character, vec![int(0), int(1), int(1)]);
        assert_eq!(e.l2_euler, int(0));
        assert_eq!(e.conditions[0].text, "η₀ − (1/2)Σηᵢ ∈ Z");
        assert_eq!(e.conditions[0].range, Some((1, 2)));
        assert_eq!(e.conditions[1].text, "ηᵢ ∈ Z");

        let e0 = example9_table(2, 3, 0).unwrap();
        assert!(e0.element.coefficients.is_empty());
        assert_eq!(e0.element.to_vector(&e0.table).unwrap(), vec![int(0)]);
        assert!(matches!(example9_table(1, 4, 1), Err(BurnsideError::NotPrime(4))));

        let line = infinite_dihedral_line();
        assert_eq!(equivariant_euler(&line, &e.table).unwrap(), e.element);
        assert_eq!(line.l2_euler_characteristic().unwrap().chi, int(0));
    }

    #[test]
    fn user_tables_are_checked() {
        let classes = vec![
            SubgroupClass { id: "1".into(), order: 1, weyl_order: StabilizerOrder::Finite(2) },
            SubgroupClass { id: "2".into(), order: 2, weyl_order: StabilizerOrder::Finite(1) },
        ];
        let sub = [("1".to_owned(), "2".to_owned())];
        let ok = FiniteSubgroupTable::user_supplied(classes.clone(), &sub, &[("1".into(), "2".into(), rat(1, 2))]);
        assert!(ok.is_ok());
        let bad = FiniteSubgroupTable::user_supplied(
            classes.clone(),
            &sub,
            &[("1".into(), "2".into(), rat(1, 2)), ("2".into(), "2".into(), int(2))],
        );
        assert!(matches!(bad, Err(BurnsideError::DiagonalNotOne(..))));
        let missing = FiniteSubgroupTable::user_supplied(classes, &sub, &[]);
        assert!(matches!(missing, Err(BurnsideError::MissingCharacter(..))));
    }

    #[test]
    fn fixed_points_of_an_orbit() {
        let g = FiniteGroup::symmetric(3);
        let table = subgroup_lattice(&g, 120).unwrap();
        let c2 = table.lattice().unwrap().representative(table.class_index("2").unwrap()).to_vec();
        let x = GammaCWComplex::new(GroupSpec::Finite(g), vec![Cell::new("p", 0, Stabilizer::Subgroup(c2))], false);
        let xk = fixed_point_complex(&x, &table, "2").unwrap();
        assert_eq!(xk.cells().len(), 1);
        assert_eq!(xk.group().order(), Some(1));
        assert_eq!(xk.l2_euler_characteristic().unwrap().chi, int(1));

        let whole = GammaCWComplex::new(
            x.group().clone(),
            vec![Cell::new("p", 0, Stabilizer::Subgroup((0..6).collect()))],
            true,
        );
        let fixed = fixed_point_complex(&whole, &table, "3").unwrap();
        assert_eq!(fixed.cells().len(), 1);
        assert!(fixed.connected());
    }

    #[test]
    fn fixed_points_under_trivial_subgroup() {
        let g = GroupSpec::Finite(FiniteGroup::cyclic(2));
        let x = GammaCWComplex::new(
            g.clone(),
            vec![Cell::free("v", 0), Cell::free("e", 1).with_boundary("v", minus_one(&g, GroupElem::Finite(1)))],
            true,
        );
        let table = subgroup_lattice(g.as_finite().unwrap(), 120).unwrap();
        let xk = fixed_point_complex(&x, &table, "1").unwrap();
        assert_eq!(xk.cells().len(), 2);
        assert_eq!(xk.cells()[1].id, "e");
        assert!(xk.validate().is_valid());
        // the free orbit has no points fixed by Z/2
        assert!(fixed_point_complex(&x, &table, "2").unwrap().cells().is_empty());
    }

    #[test]
    fn hattori_stallings_examples() {
        let g = GroupSpec::Finite(FiniteGroup::cyclic(2));
        let one = vec![vec![unit(GroupElem::Finite(0))]];
        let hs = hattori_stallings(&g, &one).unwrap();
        assert_eq!(hs.values, vec![("(0)".into(), int(1)), ("(1)".into(), int(0))]);

        let mut avg = GroupRingElem::new();
        avg.insert(GroupElem::Finite(0), rat(1, 2));
        avg.insert(GroupElem::Finite(1), rat(1, 2));
        let hs = hattori_stallings(&g, &[vec![avg]]).unwrap();
        assert_eq!(hs.get("(0)"), rat(1, 2));
        assert_eq!(hs.get("(1)"), rat(1, 2));

        let zero = hattori_stallings(&g, &[vec![GroupRingElem::new()]]).unwrap();
        assert!(zero.values.iter().all(|(_, v)| v.is_zero()));

        let not_idempotent = vec![vec![minus_one(&g, GroupElem::Finite(1))]];
        assert_eq!(hattori_stallings(&g, &not_idempotent), Err(BurnsideError::NotIdempotent));
    }

    #[test]
    fn condition_texts_for_cyclic_group() {
        let z5 = subgroup_lattice(&FiniteGroup::cyclic(5), 120).unwrap();
        let texts: Vec<String> = integrality_condition_texts(&z5).iter().map(|c| c.to_string()).collect();
        assert_eq!(texts, vec!["η₀ − (1/5)η₁ ∈ Z", "η₁ ∈ Z"]);
    }
}
