//! Exact return probabilities of simple random walks on Cayley graphs and
//! spectral-radius evidence for (non)amenability.
//!
//! With `p_{2n}` the probability that the walk is back at the identity after
//! `2n` steps, both `p_{2n}^{1/2n}` and `(p_{2n}/p_{2n−2})^{1/2}` are lower
//! bounds for the spectral radius `ρ` that increase to `ρ`; the group is
//! amenable exactly when `ρ = 1`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupOracle, RadialChain};
use crate::rational::{ln_rat, Rat};

pub const DEFAULT_SUPPORT_BOUND: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("generating set is empty")]
    NoGenerators,
    #[error("generating set is not symmetric: the inverse of {0} is missing")]
    NotSymmetric(String),
    #[error("generating set contains the identity")]
    ContainsIdentity,
    #[error("number of steps must be at least 1")]
    NoSteps,
    #[error("walk support exceeds {bound} elements after {step} steps")]
    SupportBound { bound: usize, step: usize },
    #[error("margin must lie strictly between 0 and 1")]
    BadMargin,
}

/// A finitely supported measure on the group.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkDistribution<E: Ord> {
    pub mass: BTreeMap<E, Rat>,
}

impl<E: Ord> WalkDistribution<E> {
    pub fn at(&self, x: &E) -> Rat {
        self.mass.get(x).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total(&self) -> Rat {
        self.mass.values().fold(Rat::zero(), |a, b| a + b)
    }
}

fn check_generators<O: GroupOracle>(oracle: &O, generators: &[O::Elem]) -> Result<Vec<O::Elem>, WalkError> {
    if generators.is_empty() {
        return Err(WalkError::NoGenerators);
    }
    let mut s: Vec<O::Elem> = generators.to_vec();
    s.sort();
    s.dedup();
    let e = oracle.identity();
    if s.contains(&e) {
        return Err(WalkError::ContainsIdentity);
    }
    let set: HashSet<&O::Elem> = s.iter().collect();
    if let Some(x) = s.iter().find(|x| !set.contains(&oracle.invert(x))) {
        return Err(WalkError::NotSymmetric(format!("{x:?}")));
    }
    Ok(s)
}

/// Number of walks of each length ending at each element, one step at a time.
struct WalkCounts<'a, O: GroupOracle> {
    oracle: &'a O,
    generators: Vec<O::Elem>,
    counts: HashMap<O::Elem, BigUint>,
    step: usize,
    bound: usize,
}

impl<'a, O: GroupOracle> WalkCounts<'a, O> {
    fn new(oracle: &'a O, generators: Vec<O::Elem>, bound: usize) -> Self {
        let counts = HashMap::from([(oracle.identity(), BigUint::one())]);
        WalkCounts { oracle, generators, counts, step: 0, bound }
    }

    fn advance(&mut self) -> Result<(), WalkError> {
        let mut next: HashMap<O::Elem, BigUint> = HashMap::with_capacity(self.counts.len() * 2);
        for (x, c) in &self.counts {
            for s in &self.generators {
                *next.entry(self.oracle.multiply(x, s)).or_default() += c;
            }
        }
        self.step += 1;
        if next.len() > self.bound {
            return Err(WalkError::SupportBound { bound: self.bound, step: self.step });
        }
        self.counts = next;
        Ok(())
    }

    /// `Σ_x c(x)·c(x⁻¹)`: closed walks of twice the current length.
    fn closed_pairs(&self) -> BigUint {
        self.counts
            .iter()
            .filter_map(|(x, c)| self.counts.get(&self.oracle.invert(x)).map(|d| c * d))
            .sum()
    }
}

/// `P_k`, the distribution of the uniform walk on `generators` after `k`
/// steps.
pub fn walk_distribution<O: GroupOracle>(
    oracle: &O,
    generators: &[O::Elem],
    k: usize,
    bound: usize,
) -> Result<WalkDistribution<O::Elem>, WalkError> {
    let s = check_generators(oracle, generators)?;
    let size = BigInt::from(s.len());
    let mut walk = WalkCounts::new(oracle, s, bound);
    for _ in 0..k {
        walk.advance()?;
    }
    let denominator = num_traits::pow(size, k);
    let mass = walk
        .counts
        .into_iter()
        .map(|(x, c)| (x, Rat::new(BigInt::from(c), denominator.clone())))
        .collect();
    Ok(WalkDistribution { mass })
}

/// `[p₂, p₄, …, p_{2N}]` for the uniform walk on the symmetric set
/// `generators`.
pub fn return_probabilities<O: GroupOracle>(
    oracle: &O,
    generators: &[O::Elem],
    steps: usize,
    bound: usize,
) -> Result<Vec<Rat>, WalkError> {
    if steps == 0 {
        return Err(WalkError::NoSteps);
    }
    let s = check_generators(oracle, generators)?;
    let size = BigInt::from(s.len());
    let closed = match oracle.radial(&s) {
        Some(chain) => radial_closed_walks(chain, steps),
        None => direct_closed_walks(oracle, s, steps, bound)?,
    };
    Ok(closed
        .into_iter()
        .enumerate()
        .map(|(i, c)| Rat::new(BigInt::from(c), num_traits::pow(size.clone(), 2 * (i + 1))))
        .collect())
}

fn direct_closed_walks<O: GroupOracle>(
    oracle: &O,
    generators: Vec<O::Elem>,
    steps: usize,
    bound: usize,
) -> Result<Vec<BigUint>, WalkError> {
    let mut walk = WalkCounts::new(oracle, generators, bound);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        walk.advance()?;
        out.push(walk.closed_pairs());
    }
    Ok(out)
}

/// Closed walks of lengths `2, 4, …, 2N` counted on the distance chain.
pub fn radial_closed_walks(chain: RadialChain, steps: usize) -> Vec<BigUint> {
    let top = 2 * steps + 1;
    let mut at = vec![BigUint::zero(); top + 1];
    at[0] = BigUint::one();
    let mut out = Vec::with_capacity(steps);
    for len in 1..=2 * steps {
        let mut next = vec![BigUint::zero(); top + 1];
        for d in 0..top {
            if at[d].is_zero() {
                continue;
            }
            if d == 0 {
                next[1] += &at[0] * chain.out_from_origin;
            } else {
                next[d + 1] += &at[d] * chain.outward;
                next[d - 1] += &at[d] * chain.inward;
            }
        }
        at = next;
        if len % 2 == 0 {
            out.push(at[0].clone());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AmenableConsistent,
    NonamenableEvidence,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KestenReport {
    pub generators: Vec<String>,
    pub steps: usize,
    pub margin: Rat,
    /// `p_{2n}` for `n = 1, …, N`.
    pub probabilities: Vec<Rat>,
    /// `p_{2n}^{1/2n}`, decimal.
    pub root_bounds: Vec<String>,
    /// `(p_{2n}/p_{2n−2})^{1/2}` with `p₀ = 1`, decimal.
    pub ratio_bounds: Vec<String>,
    /// The larger of the two bounds at each `n`, decimal.
    pub lower_bounds: Vec<String>,
    /// `ρ²` when the walk is on a tree-like distance chain.
    pub radius_squared: Option<Rat>,
    pub verdict: Verdict,
}

fn decimal(x: f64) -> String {
    format!("{x:.12}")
}

/// `ρ² = 4·outward·inward / out_from_origin²` for a walk on a regular tree.
pub fn tree_radius_squared(chain: RadialChain) -> Rat {
    Rat::new(
        BigInt::from(4 * chain.outward * chain.inward),
        BigInt::from(chain.out_from_origin * chain.out_from_origin),
    )
}

pub fn kesten_evidence<O: GroupOracle>(
    oracle: &O,
    generators: &[O::Elem],
    steps: usize,
    margin: &Rat,
    bound: usize,
) -> Result<KestenReport, WalkError> {
    if !(margin > &Rat::zero() && margin < &Rat::one()) {
        return Err(WalkError::BadMargin);
    }
    let s = check_generators(oracle, generators)?;
    let probabilities = return_probabilities(oracle, &s, steps, bound)?;
    let threshold = Rat::one() - margin;
    let threshold_sq = &threshold * &threshold;

    let mut root_bounds = Vec::with_capacity(steps);
    let mut ratio_bounds = Vec::with_capacity(steps);
    let mut lower_bounds = Vec::with_capacity(steps);
    let mut amenable = false;
    let mut previous = Rat::one();
    for (i, p) in probabilities.iter().enumerate() {
        let n = i + 1;
        let ratio = p / &previous;
        amenable |= *p >= num_traits::pow(threshold_sq.clone(), n) || ratio >= threshold_sq;
        let root = (ln_rat(p) / (2 * n) as f64).exp();
        let rb = (ln_rat(&ratio) / 2.0).exp();
        root_bounds.push(decimal(root));
        ratio_bounds.push(decimal(rb));
        lower_bounds.push(decimal(root.max(rb)));
        previous = p.clone();
    }
    let radius_squared = oracle.radial(&s).map(tree_radius_squared);
    let verdict = if amenable {
        Verdict::AmenableConsistent
    } else if radius_squared.as_ref().is_some_and(|r| *r <= threshold_sq) {
        Verdict::NonamenableEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(KestenReport {
        generators: s.iter().map(|x| oracle.label(x)).collect(),
        steps,
        margin: margin.clone(),
        probabilities,
        root_bounds,
        ratio_bounds,
        lower_bounds,
        radius_squared,
        verdict,
    })
}

/// Whether every bound in the report is at most `√r` for `r = radius_sq`,
/// compared exactly: `p_{2n} ≤ rⁿ` and `p_{2n}/p_{2n−2} ≤ r`.
pub fn bounds_within(probabilities: &[Rat], radius_sq: &Rat) -> bool {
    let mut previous = Rat::one();
    probabilities.iter().enumerate().all(|(i, p)| {
        let ok = *p <= num_traits::pow(radius_sq.clone(), i + 1) && p / &previous <= *radius_sq;
        previous = p.clone();
        ok
    })
}

/// Whether both bound sequences are nondecreasing, compared exactly:
/// `p_{2n+2}^n ≥ p_{2n}^{n+1}` and `p_{2n}² ≤ p_{2n−2}·p_{2n+2}`.
pub fn bounds_monotone(probabilities: &[Rat]) -> bool {
    let with_zero: Vec<Rat> = std::iter::once(Rat::one()).chain(probabilities.iter().cloned()).collect();
    let roots = (1..probabilities.len()).all(|n| {
        num_traits::pow(with_zero[n + 1].clone(), n) >= num_traits::pow(with_zero[n].clone(), n + 1)
    });
    let ratios = (1..with_zero.len() - 1)
        .all(|n| &with_zero[n] * &with_zero[n] <= &with_zero[n - 1] * &with_zero[n + 1]);
    roots && ratios
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, FreeAbelianOracle, FreeGroupOracle};
    use crate::rational::rat;

    const BOUND: usize = DEFAULT_SUPPORT_BOUND;

    #[test]
    fn integers() {
        let z = FreeAbelianOracle { rank: 1 };
        let p = return_probabilities(&z, &[vec![1], vec![-1]], 2, BOUND).unwrap();
        assert_eq!(p, vec![rat(1, 2), rat(3, 8)]);
    }

    #[test]
    fn free_group_first_return() {
        let f = FreeGroupOracle { rank: 2 };
        let s = f.standard_generators();
        assert_eq!(return_probabilities(&f, &s, 1, BOUND).unwrap(), vec![rat(1, 4)]);
    }

    #[test]
    fn radial_chain_matches_convolution() {
        for k in [2usize, 3] {
            let f = FreeGroupOracle { rank: k };
            let s = f.standard_generators();
            let radial = return_probabilities(&f, &s, 6, BOUND).unwrap();
            let direct: Vec<Rat> = direct_closed_walks(&f, s.clone(), 6, BOUND)
                .unwrap()
                .into_iter()
                .enumerate()
                .map(|(i, c)| Rat::new(BigInt::from(c), num_traits::pow(BigInt::from(2 * k), 2 * (i + 1))))
                .collect();
            assert_eq!(radial, direct);
        }
    }

    #[test]
    fn order_two_group_has_period_two() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(return_probabilities(&g, &[1], 3, BOUND).unwrap(), vec![Rat::one(); 3]);
        assert_eq!(walk_distribution(&g, &[1], 1, BOUND).unwrap().at(&0), Rat::zero());
    }

    #[test]
    fn generator_checks() {
        let z = FreeAbelianOracle { rank: 1 };
        assert!(matches!(return_probabilities(&z, &[vec![1]], 2, BOUND), Err(WalkError::NotSymmetric(_))));
        assert_eq!(return_probabilities(&z, &[vec![0]], 2, BOUND), Err(WalkError::ContainsIdentity));
        assert_eq!(return_probabilities(&z, &[], 2, BOUND), Err(WalkError::NoGenerators));
        assert_eq!(
            return_probabilities(&FreeAbelianOracle { rank: 2 }, &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], 30, 50),
            Err(WalkError::SupportBound { bound: 50, step: 7 })
        );
    }

    #[test]
    fn verdicts() {
        let z = FreeAbelianOracle { rank: 1 };
        let r = kesten_evidence(&z, &[vec![1], vec![-1]], 30, &rat(1, 10), BOUND).unwrap();
        assert_eq!(r.verdict, Verdict::AmenableConsistent);
        assert!(bounds_monotone(&r.probabilities));

        let f = FreeGroupOracle { rank: 2 };
        let r = kesten_evidence(&f, &f.standard_generators(), 30, &rat(1, 10), BOUND).unwrap();
        assert_eq!(r.verdict, Verdict::NonamenableEvidence);
        assert_eq!(r.radius_squared, Some(rat(3, 4)));
        assert!(bounds_within(&r.probabilities, &rat(3, 4)));
        assert!(bounds_monotone(&r.probabilities));

        let g = FiniteGroup::symmetric(3);
        let r = kesten_evidence(&g, &[1, 2], 12, &rat(1, 10), BOUND).unwrap();
        assert_eq!(r.verdict, Verdict::AmenableConsistent);
        assert_eq!(kesten_evidence(&g, &[1, 2], 12, &rat(0, 1), BOUND), Err(WalkError::BadMargin));
    }
}
