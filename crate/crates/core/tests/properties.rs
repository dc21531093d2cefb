mod common;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::*;
use l2dim::amenability::{
    bounds_monotone, bounds_within, kesten_evidence, return_probabilities, walk_distribution, DEFAULT_SUPPORT_BOUND,
};
use l2dim::betti::{alternating_betti_sum, betti, betti_finite, betti_zeroth, integrality_verdict};
use l2dim::burnside::{
    character_value, equivariant_euler, fixed_point_complex, global_character, hattori_stallings,
    integrality_conditions, subgroup_lattice, BurnsideElement, DEFAULT_MAX_ORDER,
};
use l2dim::gcw::{group_ring, induce_complex, GammaCWComplex, GroupRingElem};
use l2dim::group::{FiniteGroup, FreeGroupOracle, GroupElem, GroupOracle, GroupSpec};
use l2dim::io::{self, IngestOptions, ModuleDocument};
use l2dim::linalg::{
    chain_homology_ranks, fraction_field_rank, row_space_member, smith_normal_form, LaurentPoly, RingMatrix, RingTag,
};
use l2dim::pid::{
    closure, colimit_dimension, extended_dimension, submodule_contains, submodule_dimension, DirectedChain,
    FgModulePresentation, SubmoduleSpec,
};
use l2dim::{ExtDim, Rat};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn pick_group(r: &mut impl Rng) -> (&'static str, FiniteGroup) {
    let groups = small_groups();
    groups[r.gen_range(0..groups.len())].clone()
}

fn any_ring(r: &mut impl Rng) -> RingTag {
    if r.gen_bool(0.5) { RingTag::Integers } else { RingTag::LaurentUni }
}

fn unit_vector(ring: RingTag, n: usize, i: usize) -> Vec<LaurentPoly> {
    (0..n).map(|j| if i == j { LaurentPoly::one(ring.arity()) } else { LaurentPoly::zero(ring.arity()) }).collect()
}

/// A random combination of the rows of `rows`.
fn combination(r: &mut impl Rng, ring: RingTag, rows: &[Vec<LaurentPoly>], n: usize) -> Vec<LaurentPoly> {
    let mut v = vec![LaurentPoly::zero(ring.arity()); n];
    for row in rows {
        let c = LaurentPoly::constant(ring.arity(), rat(r.gen_range(-3..=3), 1));
        for (x, y) in v.iter_mut().zip(row) {
            *x = x.add(&c.mul(y));
        }
    }
    v
}

/// Walks on `F_k` without the distance-chain shortcut.
struct Direct(FreeGroupOracle);

impl GroupOracle for Direct {
    type Elem = Vec<i32>;
    fn identity(&self) -> Vec<i32> {
        self.0.identity()
    }
    fn multiply(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        self.0.multiply(a, b)
    }
    fn invert(&self, a: &Vec<i32>) -> Vec<i32> {
        self.0.invert(a)
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rank_matches_smith_diagonal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let a = random_matrix(&mut r, RingTag::Integers, rows, cols);
        let s = smith_normal_form(&a).unwrap();
        prop_assert_eq!(fraction_field_rank(&a), s.rank());
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.s.clone());
        prop_assert_eq!(s.v.mul(&s.v_inverse).unwrap(), RingMatrix::identity(RingTag::Integers, cols));
        let d: Vec<_> = s.diagonal().iter().map(|x| x.constant_term().to_integer()).collect();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides, "{:?}", d);
        }
    }

    #[test]
    fn laurent_smith_form_is_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let a = random_matrix(&mut r, RingTag::LaurentUni, rows, cols);
        let s = smith_normal_form(&a).unwrap();
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.s.clone());
        prop_assert_eq!(fraction_field_rank(&a), s.rank());
    }

    #[test]
    fn homology_shifts_and_euler_poincare(seed in any::<u64>(), k in 0usize..3) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let x = random_complex(&mut r, &g, 3);
        let c = x.expand_to_plain_complex().unwrap().chain;
        let h = chain_homology_ranks(&c);
        let mut shifted = vec![0; k];
        shifted.extend(&h);
        prop_assert_eq!(chain_homology_ranks(&c.shifted(k)), shifted);
        let alt: i64 = h.iter().enumerate().map(|(p, &v)| if p % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
        prop_assert_eq!(alt, c.euler_characteristic());
    }

    #[test]
    fn additivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = any_ring(&mut r);
        let m0 = random_presentation(&mut r, ring);
        let m2 = random_presentation(&mut r, ring);
        let sum = m0.direct_sum(&m2).unwrap();
        prop_assert_eq!(
            extended_dimension(&sum).unwrap(),
            extended_dimension(&m0).unwrap() + extended_dimension(&m2).unwrap()
        );
        let n = r.gen_range(1..=5);
        let count = r.gen_range(0..=4);
        let k = random_rows(&mut r, ring, count, n);
        let free = FgModulePresentation::free(ring, n);
        let span = SubmoduleSpec::new(free.clone(), k.clone()).unwrap();
        let coker = FgModulePresentation::new(RingMatrix::new(ring, k.len(), n, k.into_iter().flatten().collect()).unwrap());
        prop_assert_eq!(
            extended_dimension(&free).unwrap(),
            submodule_dimension(&span).unwrap() + extended_dimension(&coker).unwrap()
        );
    }

    #[test]
    fn closure_properties(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = any_ring(&mut r);
        let m = random_presentation(&mut r, ring);
        let n = m.generator_count();
        let count = r.gen_range(1..=3);
        let k = SubmoduleSpec::new(m, random_rows(&mut r, ring, count, n)).unwrap();
        let c = closure(&k).unwrap();
        prop_assert_eq!(submodule_dimension(&c).unwrap(), submodule_dimension(&k).unwrap());
        for g in k.generators() {
            prop_assert!(submodule_contains(&c, g).unwrap());
        }
        let v = combination(&mut r, ring, k.generators(), n);
        prop_assert!(submodule_contains(&k, &v).unwrap());
        prop_assert_eq!(closure(&c).unwrap(), c);
    }

    #[test]
    fn cofinality_and_monotonicity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = any_ring(&mut r);
        let m = random_presentation(&mut r, ring);
        let n = m.generator_count();
        let dims: Vec<ExtDim> = (1..=3)
            .map(|step| {
                let gens = (0..(step * n).div_ceil(3)).map(|i| unit_vector(ring, n, i)).collect();
                submodule_dimension(&SubmoduleSpec::new(m.clone(), gens).unwrap()).unwrap()
            })
            .collect();
        prop_assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(dims.iter().max().unwrap().clone(), extended_dimension(&m).unwrap());
    }

    #[test]
    fn extension_on_free_modules(n in 0usize..8, laurent in any::<bool>()) {
        let ring = if laurent { RingTag::LaurentUni } else { RingTag::Integers };
        prop_assert_eq!(extended_dimension(&FgModulePresentation::free(ring, n)).unwrap(), ExtDim::from_int(n));
    }

    #[test]
    fn colimit_direct_equals_formula(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = any_ring(&mut r);
        let modules: Vec<usize> = (0..r.gen_range(2..=5)).map(|_| r.gen_range(0..=3)).collect();
        let maps = modules.windows(2).map(|w| random_matrix(&mut r, ring, w[0], w[1])).collect();
        let chain = DirectedChain::new(ring, modules, maps).unwrap();
        let c = colimit_dimension(&chain).unwrap();
        prop_assert_eq!(c.direct, c.formula);
    }

    #[test]
    fn membership_agrees_with_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = any_ring(&mut r);
        let n = r.gen_range(1..=4);
        let count = r.gen_range(1..=3);
        let rows = random_rows(&mut r, ring, count, n);
        let b = RingMatrix::from_rows(ring, rows.clone()).unwrap();
        let v = combination(&mut r, ring, &rows, n);
        prop_assert!(row_space_member(&b, &v).unwrap());
        let doubled: Vec<Vec<LaurentPoly>> = rows.iter().map(|row| row.iter().map(|x| x.scale(&rat(2, 1))).collect()).collect();
        let b2 = RingMatrix::from_rows(ring, doubled).unwrap();
        let is_odd = |x: &LaurentPoly| x.terms().any(|(_, c)| !(c.numer() % 2u32).is_zero());
        if ring == RingTag::Integers {
            if let Some(odd) = rows.iter().find(|row| row.iter().any(is_odd)) {
                prop_assert!(!row_space_member(&b2, odd).unwrap());
            }
        }
    }

    #[test]
    fn expansion_counts_and_euler(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let x = random_complex(&mut r, &g, 3);
        let plain = x.expand_to_plain_complex().unwrap();
        for (p, cells) in plain.cells.iter().enumerate() {
            let expected: usize = x.cells().iter().filter(|c| c.dim == p).map(|c| g.order() / c.stabilizer.order().map_or(1, |o| match o {
                l2dim::gcw::StabilizerOrder::Finite(k) => k,
                l2dim::gcw::StabilizerOrder::Infinite => unreachable!(),
            })).sum();
            prop_assert_eq!(cells.len(), expected);
        }
        let chi = x.l2_euler_characteristic().unwrap().chi;
        prop_assert_eq!(chi, Rat::new(x.plain_euler_characteristic().unwrap().into(), (g.order() as i64).into()));
    }

    #[test]
    fn disjoint_unions_add(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let x = random_complex(&mut r, &g, 2);
        let y = random_complex(&mut r, &g, 2);
        let u = x.disjoint_union(&y).unwrap();
        u.validated().unwrap();
        let chi = |c: &GammaCWComplex| c.l2_euler_characteristic().unwrap().chi;
        prop_assert_eq!(chi(&u), chi(&x) + chi(&y));
        let ranks = |c: &GammaCWComplex| c.expand_to_plain_complex().unwrap().chain.ranks().to_vec();
        let (a, b) = (ranks(&x), ranks(&y));
        let sum: Vec<usize> = (0..a.len().max(b.len())).map(|p| a.get(p).unwrap_or(&0) + b.get(p).unwrap_or(&0)).collect();
        prop_assert_eq!(ranks(&u), sum);

        let t = subgroup_lattice(&g, DEFAULT_MAX_ORDER).unwrap();
        let e = |c: &GammaCWComplex| equivariant_euler(c, &t).unwrap().to_vector(&t).unwrap();
        let expected: Vec<Rat> = e(&x).iter().zip(e(&y)).map(|(a, b)| a + b).collect();
        prop_assert_eq!(e(&u), expected);
        let empty = GammaCWComplex::empty(GroupSpec::Finite(g.clone()));
        prop_assert!(e(&empty).iter().all(Zero::is_zero));
        prop_assert!(chi(&empty).is_zero());
        prop_assert!(betti_finite(&empty).unwrap().values.iter().all(|v| *v == ExtDim::zero()));
    }

    #[test]
    fn euler_identity_and_b0(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let x = random_complex(&mut r, &g, 3);
        let report = betti(&x).unwrap();
        prop_assert_eq!(alternating_betti_sum(&report.values).unwrap(), x.l2_euler_characteristic().unwrap().chi);
        if x.connected() {
            prop_assert_eq!(report.values[0].clone(), betti_zeroth(x.group(), true).unwrap());
        }
        prop_assert!(integrality_verdict(&report).holds);
    }

    #[test]
    fn induction_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let hosts = [FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::cyclic(6)];
        let gamma = &hosts[r.gen_range(0..hosts.len())];
        let h = random_subgroup(&mut r, gamma);
        let (delta, embedding) = gamma.subgroup_as_group(&h).unwrap();
        let x = random_complex(&mut r, &delta, 2);
        let induced = induce_complex(&x, gamma, &embedding).unwrap();
        prop_assert_eq!(betti_finite(&induced).unwrap().values, betti_finite(&x).unwrap().values);
    }

    #[test]
    fn fixed_point_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let x = random_complex(&mut r, &g, 2);
        let t = subgroup_lattice(&g, DEFAULT_MAX_ORDER).unwrap();
        let e = equivariant_euler(&x, &t).unwrap();
        for k in t.classes() {
            let fixed = fixed_point_complex(&x, &t, &k.id).unwrap();
            let lhs = fixed.l2_euler_characteristic().unwrap().chi;
            let rhs: Rat = t.classes().iter().map(|h| e.get(&h.id) * character_value(&t, &k.id, &h.id).unwrap()).sum();
            prop_assert_eq!(lhs, rhs, "class {}", k.id);
        }
    }

    #[test]
    fn integer_elements_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let t = subgroup_lattice(&g, DEFAULT_MAX_ORDER).unwrap();
        let mut a = BurnsideElement::new();
        for c in t.classes() {
            a.add(&c.id, rat(r.gen_range(-6..=6), 1));
        }
        let report = integrality_conditions(&t, &global_character(&t, &a).unwrap()).unwrap();
        prop_assert!(report.pass);
        prop_assert_eq!(report.preimage, a.to_vector(&t).unwrap());
    }

    #[test]
    fn hattori_stallings_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let spec = GroupSpec::Finite(g.clone());
        let idempotent = |h: Vec<usize>| -> GroupRingElem {
            let w = rat(1, h.len() as i64);
            group_ring(h.into_iter().map(|x| (GroupElem::Finite(x), w.clone())))
        };
        let e1 = idempotent(random_subgroup(&mut r, &g));
        let e2 = idempotent(random_subgroup(&mut r, &g));
        let zero = GroupRingElem::new();
        let h1 = hattori_stallings(&spec, &[vec![e1.clone()]]).unwrap();
        let h2 = hattori_stallings(&spec, &[vec![e2.clone()]]).unwrap();
        let both = hattori_stallings(&spec, &[vec![e1, zero.clone()], vec![zero, e2]]).unwrap();
        for (label, v) in &both.values {
            prop_assert_eq!(v.clone(), h1.get(label) + h2.get(label));
        }
    }

    #[test]
    fn return_probabilities_are_supermultiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = pick_group(&mut r);
        let gens: Vec<usize> = {
            let mut s: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity() && r.gen_bool(0.6)).collect();
            if s.is_empty() { s.push((g.identity() + 1) % g.order()); }
            let mut all = s.clone();
            all.extend(s.iter().map(|&x| g.inv(x)));
            all.sort_unstable();
            all.dedup();
            all
        };
        let p = return_probabilities(&g, &gens, 12, DEFAULT_SUPPORT_BOUND).unwrap();
        for n in 1..=6 {
            for m in 1..=6 {
                prop_assert!(p[n + m - 1] >= &p[n - 1] * &p[m - 1]);
            }
        }
        prop_assert!(p.iter().all(|x| *x > Rat::zero() && *x <= Rat::one()));
        prop_assert!(bounds_monotone(&p));
        let dist = walk_distribution(&g, &gens, 5, DEFAULT_SUPPORT_BOUND).unwrap();
        prop_assert!(dist.total().is_one());
    }
}

#[test]
fn finite_walks_equidistribute() {
    for (name, g) in small_groups() {
        if g.order() < 3 {
            continue;
        }
        let gens: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
        let n = 4 * g.order();
        let p = return_probabilities(&g, &gens, n, DEFAULT_SUPPORT_BOUND).unwrap();
        let limit = rat(1, g.order() as i64);
        let gap = &p[n - 1] - &limit;
        assert!(gap.abs() <= &limit * &limit, "{name}: p = {}", p[n - 1]);
    }
}

#[test]
fn free_group_bounds_respect_kesten_radius() {
    for k in 1..=3usize {
        let f = FreeGroupOracle { rank: k };
        let p = return_probabilities(&f, &f.standard_generators(), 24, DEFAULT_SUPPORT_BOUND).unwrap();
        assert!(bounds_within(&p, &rat(2 * k as i64 - 1, (k * k) as i64)), "F_{k}");
    }
}

#[test]
fn radial_chain_matches_direct_walks() {
    for k in 1..=3usize {
        let f = FreeGroupOracle { rank: k };
        let gens = f.standard_generators();
        assert!(f.radial(&gens).is_some());
        let fast = return_probabilities(&f, &gens, 7, DEFAULT_SUPPORT_BOUND).unwrap();
        let slow = return_probabilities(&Direct(f), &gens, 7, DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(fast, slow, "F_{k}");
    }
}

#[test]
fn corpus_documents_round_trip() {
    let opts = IngestOptions::default();
    let mut complexes: Vec<GammaCWComplex> = finite_corpus(31, 40).into_iter().map(|(_, x)| x).collect();
    complexes.extend([circle_cover(), torus_cover(), circle_wedge_sphere_cover(), wedge_of_circles_cover(2)]);
    for x in &complexes {
        let text = io::complex_to_json(x).to_string();
        assert_eq!(&io::complex_from_str(&text, &opts).unwrap(), x);
        let report = betti(x).unwrap();
        assert_eq!(io::betti_report_from_json(&io::betti_report_to_json(&report)).unwrap(), report);
    }
    for (_, g) in small_groups() {
        let t = subgroup_lattice(&g, DEFAULT_MAX_ORDER).unwrap();
        let back = io::table_from_str(&io::table_to_json(&t).to_string(), &opts).unwrap();
        assert_eq!(back.character_matrix(), t.character_matrix());
        assert_eq!(
            back.classes().iter().map(|c| &c.id).collect::<Vec<_>>(),
            t.classes().iter().map(|c| &c.id).collect::<Vec<_>>()
        );
        let mut a = BurnsideElement::new();
        for (i, c) in t.classes().iter().enumerate() {
            a.add(&c.id, rat(i as i64 - 1, 3));
        }
        let text = io::burnside_element_to_json(&a).to_string();
        assert_eq!(io::burnside_element_from_str(&text).unwrap(), a);
    }
    let mut r = rng(32);
    for _ in 0..40 {
        let ring = any_ring(&mut r);
        let module = random_presentation(&mut r, ring);
        let n = module.generator_count();
        let submodule = Some(SubmoduleSpec::new(module.clone(), random_rows(&mut r, ring, 2, n)).unwrap());
        let doc = ModuleDocument { module, submodule };
        assert_eq!(io::module_from_str(&io::module_to_json(&doc).to_string()).unwrap(), doc);
        let modules = vec![2, 3, 1];
        let maps = vec![random_matrix(&mut r, ring, 2, 3), random_matrix(&mut r, ring, 3, 1)];
        let chain = DirectedChain::new(ring, modules, maps).unwrap();
        assert_eq!(io::chain_from_str(&io::chain_to_json(&chain).to_string()).unwrap(), chain);
    }
    for k in 1..=3usize {
        let f = FreeGroupOracle { rank: k };
        let report = kesten_evidence(&f, &f.standard_generators(), 10, &rat(1, 10), DEFAULT_SUPPORT_BOUND).unwrap();
        assert_eq!(io::kesten_report_from_json(&io::kesten_report_to_json(&report)).unwrap(), report);
    }
}
