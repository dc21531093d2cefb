//! Random test corpora: equivariant simplicial complexes over finite groups,
//! module presentations over Z and Q[z^±1], and the standard free complexes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use l2dim::gcw::{group_ring, Cell, GammaCWComplex, Stabilizer};
use l2dim::group::{FiniteGroup, GroupElem, GroupSpec};
use l2dim::linalg::{LaurentPoly, RingMatrix, RingTag};
use l2dim::pid::FgModulePresentation;
use l2dim::Rat;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Finite groups of orders 2, 3, 4 and 6.
pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z/2", FiniteGroup::cyclic(2)),
        ("Z/3", FiniteGroup::cyclic(3)),
        ("Z/4", FiniteGroup::cyclic(4)),
        ("Z/2xZ/2", FiniteGroup::klein()),
        ("Z/6", FiniteGroup::cyclic(6)),
        ("S3", FiniteGroup::symmetric(3)),
    ]
}

pub fn random_subgroup(rng: &mut impl Rng, g: &FiniteGroup) -> Vec<usize> {
    let gens: Vec<usize> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..g.order())).collect();
    g.subgroup(&g.generate(&gens)).expect("generated subgroup")
}

/// The vertex set `⊔ Γ/H_o` with its Γ-action.
struct VertexSet<'a> {
    g: &'a FiniteGroup,
    stabilizers: Vec<Vec<usize>>,
    vertices: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl<'a> VertexSet<'a> {
    fn new(g: &'a FiniteGroup, stabilizers: Vec<Vec<usize>>) -> Self {
        let vertices: Vec<(usize, usize)> = stabilizers
            .iter()
            .enumerate()
            .flat_map(|(o, h)| g.left_cosets(h).into_iter().map(move |c| (o, c)))
            .collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        VertexSet { g, stabilizers, vertices, index }
    }

    fn act(&self, gamma: usize, v: usize) -> usize {
        let (o, c) = self.vertices[v];
        self.index[&(o, self.g.coset_rep(self.g.mul(gamma, c), &self.stabilizers[o]))]
    }

    fn image(&self, gamma: usize, s: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = s.iter().map(|&v| self.act(gamma, v)).collect();
        t.sort_unstable();
        t
    }

    fn pointwise_stabilizer(&self, s: &[usize]) -> Vec<usize> {
        (0..self.g.order()).filter(|&x| s.iter().all(|&v| self.act(x, v) == v)).collect()
    }

    /// Every face has equal setwise and pointwise stabilizers, so stabilizers
    /// fix cells pointwise.
    fn admissible(&self, s: &[usize]) -> bool {
        (1u32..1 << s.len()).all(|mask| {
            let face: Vec<usize> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            (0..self.g.order()).all(|x| self.image(x, &face) != face || face.iter().all(|&v| self.act(x, v) == v))
        })
    }
}

fn permutation_sign(from: &[usize], to: &[usize]) -> i64 {
    let mut p: Vec<usize> = from.iter().map(|x| to.iter().position(|y| y == x).expect("same set")).collect();
    let mut sign = 1;
    for i in 0..p.len() {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// A random Γ-simplicial complex of dimension at most `max_dim`, as a
/// Γ-CW-complex with one cell per simplex orbit.
pub fn random_complex(rng: &mut impl Rng, g: &FiniteGroup, max_dim: usize) -> GammaCWComplex {
    let orbits = rng.gen_range(1..=3);
    let vs = VertexSet::new(g, (0..orbits).map(|_| random_subgroup(rng, g)).collect());
    let n = vs.vertices.len();
    let mut simplices: BTreeSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for _ in 0..rng.gen_range(1..=6) {
        let k = rng.gen_range(2..=max_dim + 1).min(n);
        let mut s: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
        s.sort_unstable();
        if k < 2 || !vs.admissible(&s) {
            continue;
        }
        for mask in 1u32..1 << s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            for x in 0..g.order() {
                simplices.insert(vs.image(x, &face));
            }
        }
    }
    let mut orbit_of: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for s in &simplices {
        if orbit_of.contains_key(s) {
            continue;
        }
        for x in 0..g.order() {
            orbit_of.entry(vs.image(x, s)).or_insert((reps.len(), x));
        }
        reps.push(s.clone());
    }
    let id = |o: usize| format!("c{}_{o}", reps[o].len() - 1);
    let cells = reps
        .iter()
        .enumerate()
        .map(|(o, s)| {
            let stab = vs.pointwise_stabilizer(s);
            let stabilizer = if stab.len() == 1 { Stabilizer::Trivial } else { Stabilizer::Subgroup(stab) };
            let mut cell = Cell::new(id(o), s.len() - 1, stabilizer);
            if s.len() > 1 {
                for i in 0..s.len() {
                    let face: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    let (t, x) = orbit_of[&face];
                    let moved: Vec<usize> = reps[t].iter().map(|&v| vs.act(x, v)).collect();
                    let sign = if i % 2 == 0 { 1 } else { -1 } * permutation_sign(&moved, &face);
                    cell = cell.with_boundary(id(t), group_ring([(GroupElem::Finite(x), rat(sign, 1))]));
                }
            }
            cell
        })
        .collect();
    GammaCWComplex::new(GroupSpec::Finite(g.clone()), cells, false)
        .with_detected_connectivity()
        .expect("simplicial complexes are valid")
}

pub fn random_connected_complex(rng: &mut impl Rng, g: &FiniteGroup, max_dim: usize) -> GammaCWComplex {
    loop {
        let x = random_complex(rng, g, max_dim);
        if x.connected() {
            return x;
        }
    }
}

/// `(corpus label, complex)` for `count` random complexes over the small groups.
pub fn finite_corpus(seed: u64, count: usize) -> Vec<(String, GammaCWComplex)> {
    let mut r = rng(seed);
    let groups = small_groups();
    (0..count)
        .map(|i| {
            let (name, g) = &groups[i % groups.len()];
            let max_dim = r.gen_range(1..=3);
            (format!("{name}#{i}"), random_complex(&mut r, g, max_dim))
        })
        .collect()
}

fn abelian(v: &[i64]) -> GroupElem {
    GroupElem::Abelian(v.to_vec())
}

fn word(v: &[i32]) -> GroupElem {
    GroupElem::Word(v.to_vec())
}

fn difference(a: GroupElem, b: GroupElem) -> l2dim::gcw::GroupRingElem {
    group_ring([(a, rat(1, 1)), (b, rat(-1, 1))])
}

/// The real line with Z acting by translation.
pub fn circle_cover() -> GammaCWComplex {
    GammaCWComplex::new(
        GroupSpec::free_abelian(1).unwrap(),
        vec![Cell::free("v", 0), Cell::free("e", 1).with_boundary("v", difference(abelian(&[1]), abelian(&[0])))],
        true,
    )
}

/// The plane with Z² acting by translation.
pub fn torus_cover() -> GammaCWComplex {
    GammaCWComplex::new(
        GroupSpec::free_abelian(2).unwrap(),
        vec![
            Cell::free("v", 0),
            Cell::free("a", 1).with_boundary("v", difference(abelian(&[1, 0]), abelian(&[0, 0]))),
            Cell::free("b", 1).with_boundary("v", difference(abelian(&[0, 1]), abelian(&[0, 0]))),
            Cell::free("f", 2)
                .with_boundary("a", difference(abelian(&[0, 0]), abelian(&[0, 1])))
                .with_boundary("b", difference(abelian(&[1, 0]), abelian(&[0, 0]))),
        ],
        true,
    )
}

/// The universal cover of `S¹ ∨ S²`: a line with a sphere at each integer.
pub fn circle_wedge_sphere_cover() -> GammaCWComplex {
    GammaCWComplex::new(
        GroupSpec::free_abelian(1).unwrap(),
        vec![
            Cell::free("v", 0),
            Cell::free("e", 1).with_boundary("v", difference(abelian(&[1]), abelian(&[0]))),
            Cell::free("s", 2),
        ],
        true,
    )
}

/// The Cayley tree of `F_k`: the universal cover of a wedge of `k` circles.
pub fn wedge_of_circles_cover(k: usize) -> GammaCWComplex {
    let mut cells = vec![Cell::free("v", 0)];
    for i in 1..=k as i32 {
        cells.push(Cell::free(format!("e{i}"), 1).with_boundary("v", difference(word(&[i]), word(&[]))));
    }
    GammaCWComplex::new(GroupSpec::free(k).unwrap(), cells, true)
}

fn random_entry(rng: &mut impl Rng, ring: RingTag) -> LaurentPoly {
    if rng.gen_bool(0.35) {
        return LaurentPoly::zero(ring.arity());
    }
    match ring {
        RingTag::Integers | RingTag::Rationals => LaurentPoly::integer(rng.gen_range(-10..=10)),
        _ => {
            let terms = (0..rng.gen_range(1..=2))
                .map(|_| (vec![rng.gen_range(-2..=2); ring.arity()], rat(rng.gen_range(-10..=10), 1)))
                .collect::<Vec<_>>();
            LaurentPoly::from_terms(ring.arity(), terms)
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, ring: RingTag, rows: usize, cols: usize) -> RingMatrix {
    let entries = (0..rows * cols).map(|_| random_entry(rng, ring)).collect();
    RingMatrix::new(ring, rows, cols, entries).expect("entries in ring")
}

pub fn random_rows(rng: &mut impl Rng, ring: RingTag, rows: usize, cols: usize) -> Vec<Vec<LaurentPoly>> {
    random_matrix(rng, ring, rows, cols).to_rows()
}

/// A presentation with at most 6 generators and 6 relations, entries bounded
/// by 10.
pub fn random_presentation(rng: &mut impl Rng, ring: RingTag) -> FgModulePresentation {
    let cols = rng.gen_range(1..=6);
    let rows = rng.gen_range(0..=6);
    FgModulePresentation::new(random_matrix(rng, ring, rows, cols))
}
