//! The executable group families: finite groups given by multiplication
//! tables, free abelian groups Zⁿ and free groups F_k.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table must be a nonempty square, row {row} has length {len}")]
    NotSquare { row: usize, len: usize },
    #[error("table entry {value} at ({row}, {col}) is not an element")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("{0} is not a subgroup")]
    NotSubgroup(String),
    #[error("map of length {got} cannot be defined on a group of order {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("map is not injective")]
    NotInjective,
    #[error("element {0} does not belong to {1}")]
    ForeignElement(String, String),
    #[error("{0} has no element arithmetic")]
    NoArithmetic(String),
}

/// A finite group on `0..order` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    names: Vec<String>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotSquare { row: 0, len: 0 });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len() });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or(GroupError::NoInverse(x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let names = match names {
            Some(v) if v.len() != n => return Err(GroupError::NameCount { expected: n, got: v.len() }),
            Some(v) => v,
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        Ok(FiniteGroup { table, names, identity, inverses })
    }

    /// Builds the table of a group given as a closed list of elements under
    /// an associative operation; the first element must be the identity.
    fn from_elements<T: Clone + Eq + Hash>(
        elems: Vec<T>,
        op: impl Fn(&T, &T) -> T,
        name: impl Fn(&T) -> String,
    ) -> Self {
        let index: std::collections::HashMap<T, usize> =
            elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&op(a, b)]).collect())
            .collect();
        let names = elems.iter().map(name).collect();
        FiniteGroup::new(table, Some(names)).expect("closed associative operation")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        Self::from_elements((0..n).collect(), |a, b| (a + b) % n, |a| a.to_string())
    }

    /// The dihedral group of order `2n`: `rᵏ` is `(k, false)`, `rᵏs` is `(k, true)`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let elems: Vec<(usize, bool)> =
            (0..n).map(|k| (k, false)).chain((0..n).map(|k| (k, true))).collect();
        Self::from_elements(
            elems,
            |&(a, s), &(b, t)| {
                let b = if s { (n - b) % n } else { b };
                ((a + b) % n, s ^ t)
            },
            |&(k, s)| match (k, s) {
                (0, false) => "e".into(),
                (k, false) => format!("r{k}"),
                (0, true) => "s".into(),
                (k, true) => format!("r{k}s"),
            },
        )
    }

    /// The symmetric group on `n` letters; composition `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        Self::permutation_group(permutations(n))
    }

    pub fn alternating(n: usize) -> Self {
        Self::permutation_group(permutations(n).into_iter().filter(|p| parity(p) == 0).collect())
    }

    fn permutation_group(elems: Vec<Vec<usize>>) -> Self {
        Self::from_elements(
            elems,
            |s, t| t.iter().map(|&i| s[i]).collect(),
            |p| format!("[{}]", p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")),
        )
    }

    pub fn klein() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    /// `G × H` with `(g, h)` stored at `g·|H| + h`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let m = h.order();
        let n = g.order() * m;
        let table = (0..n)
            .map(|x| (0..n).map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m)).collect())
            .collect();
        let names = (0..n).map(|x| format!("({},{})", g.name(x / m), h.name(x % m))).collect();
        FiniteGroup::new(table, Some(names)).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: HashSet<usize> = elems.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order())
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Checks `elems` is a subgroup and returns it sorted and deduplicated.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Vec<usize>, GroupError> {
        if !self.is_subgroup(elems) {
            return Err(GroupError::NotSubgroup(format!("{elems:?}")));
        }
        let mut v = elems.to_vec();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// `g H g⁻¹`, sorted.
    pub fn conjugate_subgroup(&self, h: &[usize], g: usize) -> Vec<usize> {
        let mut v: Vec<usize> = h.iter().map(|&x| self.conjugate(x, g)).collect();
        v.sort_unstable();
        v
    }

    pub fn normalizer(&self, h: &[usize]) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.conjugate_subgroup(h, g) == h).collect()
    }

    /// Canonical representative of the left coset `gH`: its smallest element.
    pub fn coset_rep(&self, g: usize, h: &[usize]) -> usize {
        h.iter().map(|&x| self.mul(g, x)).min().expect("nonempty subgroup")
    }

    /// Sorted canonical representatives of `G/H`.
    pub fn left_cosets(&self, h: &[usize]) -> Vec<usize> {
        let reps: BTreeSet<usize> = (0..self.order()).map(|g| self.coset_rep(g, h)).collect();
        reps.into_iter().collect()
    }

    /// The subgroup `h` as a group in its own right, with its embedding.
    pub fn subgroup_as_group(&self, h: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let h = self.subgroup(h)?;
        let mut embedding = vec![self.identity];
        embedding.extend(h.iter().copied().filter(|&x| x != self.identity));
        let pos = |x: usize| embedding.iter().position(|&y| y == x).expect("closed");
        let table = embedding
            .iter()
            .map(|&a| embedding.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let names = embedding.iter().map(|&x| self.names[x].clone()).collect();
        Ok((FiniteGroup::new(table, Some(names))?, embedding))
    }

    /// Checks that `map : self → target` is an injective homomorphism.
    pub fn check_embedding(&self, target: &FiniteGroup, map: &[usize]) -> Result<(), GroupError> {
        if map.len() != self.order() {
            return Err(GroupError::MapLength { expected: self.order(), got: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&x| x >= target.order()) {
            return Err(GroupError::ForeignElement(bad.to_string(), "target group".into()));
        }
        for a in 0..self.order() {
            for b in 0..self.order() {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        let distinct: HashSet<usize> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return Err(GroupError::NotInjective);
        }
        Ok(())
    }

    /// Conjugacy classes of elements, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order()).map(|g| self.conjugate(x, g)).collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect::<Vec<_>>()];
    let mut current: Vec<usize> = (0..n).collect();
    // lexicographic successor
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}

fn parity(p: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

/// An element in the normal form of its family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    Finite(usize),
    /// Exponent vector in Zⁿ.
    Abelian(Vec<i64>),
    /// Freely reduced word; letter `±(i+1)` is the `i`-th generator or its inverse.
    Word(Vec<i32>),
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Finite(i) => write!(f, "{i}"),
            GroupElem::Abelian(v) => write!(f, "{v:?}"),
            GroupElem::Word(w) if w.is_empty() => f.write_str("e"),
            GroupElem::Word(w) => {
                let letters: Vec<String> = w
                    .iter()
                    .map(|&l| {
                        let name = free_letter(l.unsigned_abs() as usize - 1);
                        if l < 0 { format!("{name}^-1") } else { name }
                    })
                    .collect();
                f.write_str(&letters.join(" "))
            }
        }
    }
}

fn free_letter(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefgh";
    match LETTERS.get(i) {
        Some(&c) => (c as char).to_string(),
        None => format!("x{}", i + 1),
    }
}

/// The group Γ acting on a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
    Free { rank: usize },
    /// A group known only by name, for complexes that carry orbit types but
    /// no boundary data.
    Declared { name: String },
}

impl GroupSpec {
    pub fn free_abelian(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 { Err(GroupError::ZeroRank) } else { Ok(GroupSpec::FreeAbelian { rank }) }
    }

    pub fn free(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 { Err(GroupError::ZeroRank) } else { Ok(GroupSpec::Free { rank }) }
    }

    /// `Some(|Γ|)` for finite groups.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Finite(g) => Some(g.order()),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self {
            GroupSpec::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            GroupSpec::Finite(g) => format!("finite group of order {}", g.order()),
            GroupSpec::FreeAbelian { rank } => format!("Z^{rank}"),
            GroupSpec::Free { rank } => format!("F_{rank}"),
            GroupSpec::Declared { name } => name.clone(),
        }
    }

    pub fn identity(&self) -> Result<GroupElem, GroupError> {
        match self {
            GroupSpec::Finite(g) => Ok(GroupElem::Finite(g.identity())),
            GroupSpec::FreeAbelian { rank } => Ok(GroupElem::Abelian(vec![0; *rank])),
            GroupSpec::Free { .. } => Ok(GroupElem::Word(Vec::new())),
            GroupSpec::Declared { name } => Err(GroupError::NoArithmetic(name.clone())),
        }
    }

    /// Checks that `x` is a normal-form element of this group.
    pub fn check(&self, x: &GroupElem) -> Result<(), GroupError> {
        let ok = match (self, x) {
            (GroupSpec::Finite(g), GroupElem::Finite(i)) => *i < g.order(),
            (GroupSpec::FreeAbelian { rank }, GroupElem::Abelian(v)) => v.len() == *rank,
            (GroupSpec::Free { rank }, GroupElem::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::Declared { name }, _) => return Err(GroupError::NoArithmetic(name.clone())),
            _ => false,
        };
        if ok { Ok(()) } else { Err(GroupError::ForeignElement(x.to_string(), self.summary())) }
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem, GroupError> {
        match (self, a, b) {
            (GroupSpec::Finite(g), GroupElem::Finite(x), GroupElem::Finite(y)) => {
                Ok(GroupElem::Finite(g.mul(*x, *y)))
            }
            (GroupSpec::FreeAbelian { .. }, GroupElem::Abelian(x), GroupElem::Abelian(y)) => {
                Ok(GroupElem::Abelian(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (GroupSpec::Free { .. }, GroupElem::Word(x), GroupElem::Word(y)) => {
                Ok(GroupElem::Word(reduce_concat(x, y)))
            }
            (GroupSpec::Declared { name }, _, _) => Err(GroupError::NoArithmetic(name.clone())),
            _ => Err(GroupError::ForeignElement(format!("{a} or {b}"), self.summary())),
        }
    }

    pub fn inv(&self, a: &GroupElem) -> Result<GroupElem, GroupError> {
        match (self, a) {
            (GroupSpec::Finite(g), GroupElem::Finite(x)) => Ok(GroupElem::Finite(g.inv(*x))),
            (GroupSpec::FreeAbelian { .. }, GroupElem::Abelian(x)) => {
                Ok(GroupElem::Abelian(x.iter().map(|p| -p).collect()))
            }
            (GroupSpec::Free { .. }, GroupElem::Word(w)) => {
                Ok(GroupElem::Word(w.iter().rev().map(|l| -l).collect()))
            }
            (GroupSpec::Declared { name }, _) => Err(GroupError::NoArithmetic(name.clone())),
            _ => Err(GroupError::ForeignElement(a.to_string(), self.summary())),
        }
    }
}

/// `x·y` freely reduced, assuming both are reduced.
pub fn reduce_concat(x: &[i32], y: &[i32]) -> Vec<i32> {
    let mut out = x.to_vec();
    for &l in y {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Walks in the distance-from-identity chain of a Cayley graph: from 0 the
/// walk moves out along `out_from_origin` edges, from `d ≥ 1` along
/// `outward` edges to `d+1` and `inward` edges to `d−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadialChain {
    pub out_from_origin: u64,
    pub outward: u64,
    pub inward: u64,
}

/// Multiplication, inversion and identity in a fixed normal form.
pub trait GroupOracle {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;

    /// For generating sets whose Cayley graph is distance-regular from the
    /// identity in the sense of [`RadialChain`]; `None` otherwise.
    fn radial(&self, _generators: &[Self::Elem]) -> Option<RadialChain> {
        None
    }

    fn label(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

impl GroupOracle for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.mul(*a, *b)
    }

    fn invert(&self, a: &usize) -> usize {
        self.inv(*a)
    }

    fn label(&self, a: &usize) -> String {
        self.name(*a).to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeAbelianOracle {
    pub rank: usize,
}

impl GroupOracle for FreeAbelianOracle {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn invert(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn label(&self, a: &Vec<i64>) -> String {
        GroupElem::Abelian(a.clone()).to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroupOracle {
    pub rank: usize,
}

impl FreeGroupOracle {
    /// The `2k` generators `a₁^{±1}, …, a_k^{±1}`.
    pub fn standard_generators(&self) -> Vec<Vec<i32>> {
        (1..=self.rank as i32).flat_map(|i| [vec![i], vec![-i]]).collect()
    }
}

impl GroupOracle for FreeGroupOracle {
    type Elem = Vec<i32>;

    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }

    fn multiply(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        reduce_concat(a, b)
    }

    fn invert(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|l| -l).collect()
    }

    fn label(&self, a: &Vec<i32>) -> String {
        GroupElem::Word(a.clone()).to_string()
    }

    fn radial(&self, generators: &[Vec<i32>]) -> Option<RadialChain> {
        let mut given: Vec<&Vec<i32>> = generators.iter().collect();
        given.sort();
        given.dedup();
        let mut standard = self.standard_generators();
        standard.sort();
        if given.len() != standard.len() || given.iter().zip(&standard).any(|(a, b)| *a != b) {
            return None;
        }
        let k = self.rank as u64;
        Some(RadialChain { out_from_origin: 2 * k, outward: 2 * k - 1, inward: 1 })
    }
}
