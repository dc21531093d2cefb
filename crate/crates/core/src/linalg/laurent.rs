use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Rat;

/// The coefficient ring of a matrix, module or chain complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    Integers,
    /// Q. Finite-group chain complexes expand to rational matrices.
    Rationals,
    /// Q[z, z⁻¹]
    LaurentUni,
    /// Q[z₁^±, …, zₙ^±]
    LaurentMulti(usize),
}

impl RingTag {
    /// Number of Laurent variables.
    pub fn arity(self) -> usize {
        match self {
            RingTag::Integers | RingTag::Rationals => 0,
            RingTag::LaurentUni => 1,
            RingTag::LaurentMulti(n) => n,
        }
    }

    pub fn is_pid(self) -> bool {
        !matches!(self, RingTag::LaurentMulti(_))
    }

    pub fn is_valid(self) -> bool {
        !matches!(self, RingTag::LaurentMulti(0))
    }

    /// Whether `p` is an element of this ring.
    pub fn contains(self, p: &LaurentPoly) -> bool {
        if p.nvars() != self.arity() {
            return false;
        }
        match self {
            RingTag::Integers => p.terms.values().all(|c| c.is_integer()),
            _ => true,
        }
    }

    pub fn name(self) -> String {
        match self {
            RingTag::Integers => "Z".into(),
            RingTag::Rationals => "Q".into(),
            RingTag::LaurentUni => "Q[z^±1]".into(),
            RingTag::LaurentMulti(n) => format!("Q[z1^±1..z{n}^±1]"),
        }
    }
}

/// A Laurent polynomial with rational coefficients in `nvars` variables.
///
/// With `nvars == 0` this is just a rational constant, which is how integer
/// and rational matrix entries are stored. Terms are kept in a map ordered
/// lexicographically by exponent vector; that order is compatible with
/// multiplication on Zⁿ, so leading terms multiply.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(0, Rat::from_integer(BigInt::from(n)))
    }

    pub fn monomial(exponents: Vec<i64>, c: Rat) -> Self {
        let nvars = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms
    /// are combined.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, Rat)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    /// Coefficient of the zero exponent.
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rat::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Vec<i64>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn trailing(&self) -> Option<(&Vec<i64>, &Rat)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, e: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c · z^shift`.
    pub fn mul_monomial(&self, shift: &[i64], c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (add_exp(e, shift), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exp(e1, e2), c1 * c2);
            }
        }
        out
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` when `d` does
    /// not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (d_lead_e, d_lead_c) = d.leading()?;
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if d.terms.len() == 1 {
            let shift: Vec<i64> = d_lead_e.iter().map(|x| -x).collect();
            return Some(self.mul_monomial(&shift, &d_lead_c.recip()));
        }
        // Every quotient exponent lies lexicographically at or above
        // trail(self) − trail(d); falling below it means d ∤ self.
        let floor = sub_exp(self.trailing().unwrap().0, d.trailing().unwrap().0);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            let qe = sub_exp(re, d_lead_e);
            if qe < floor {
                return None;
            }
            let qc = rc / d_lead_c;
            rem = rem.sub(&d.mul_monomial(&qe, &qc));
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Evaluates at a point with nonzero rational coordinates.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                v *= pow_rat(x, k);
            }
            acc += v;
        }
        acc
    }

    /// Univariate only: `max exponent − min exponent`, the Euclidean size
    /// on Q[z^±1] (units are exactly the monomials, which have span 0).
    pub fn span(&self) -> Option<i64> {
        debug_assert_eq!(self.nvars, 1);
        let lo = self.trailing()?.0[0];
        let hi = self.leading()?.0[0];
        Some(hi - lo)
    }

    /// Univariate Euclidean division: `self = q·d + r` with
    /// `span(r) < span(d)` (or `r = 0`).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert_eq!(self.nvars, 1);
        assert!(!d.is_zero(), "division by zero polynomial");
        let d_lo = d.trailing().unwrap().0[0];
        let d_hi = d.leading().unwrap().0[0];
        let d_span = d_hi - d_lo;
        let lead_c = d.leading().unwrap().1.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(1);
        while rem.span().is_some_and(|span| span >= d_span) {
            let (re, rc) = rem.leading().unwrap();
            let shift = vec![re[0] - d_hi];
            let c = rc / &lead_c;
            rem = rem.sub(&d.mul_monomial(&shift, &c));
            quot.add_term(shift, c);
        }
        (quot, rem)
    }

    /// Unit `u` (a monomial) with `self · u` monic with lowest exponent 0.
    pub fn normalizing_unit(&self) -> Self {
        assert_eq!(self.nvars, 1);
        match (self.trailing(), self.leading()) {
            (Some((lo, _)), Some((_, lc))) => Self::monomial(vec![-lo[0]], lc.recip()),
            _ => Self::one(1),
        }
    }

    /// Inverse of a monomial.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Self::monomial(e.iter().map(|x| -x).collect(), c.recip()))
    }

    fn var_name(&self, i: usize) -> String {
        match self.nvars {
            1 => "z".into(),
            2 => ["z", "w"][i].into(),
            _ => format!("z{}", i + 1),
        }
    }
}

fn add_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_exp(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn pow_rat(x: &Rat, k: i64) -> Rat {
    let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let abs = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.var_name(i)
                    } else {
                        format!("{}^{}", self.var_name(i), k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn uni(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(1, terms.iter().map(|&(e, c)| (vec![e], int(c))))
    }

    #[test]
    fn arithmetic_and_display() {
        let z = LaurentPoly::var(1, 0);
        let p = z.sub(&LaurentPoly::one(1));
        assert_eq!(p.to_string(), "z - 1");
        let sq = p.mul(&p);
        assert_eq!(sq, uni(&[(2, 1), (1, -2), (0, 1)]));
        assert!(p.sub(&p).is_zero());
        let w = LaurentPoly::var(2, 1);
        assert_eq!(w.to_string(), "w");
    }

    #[test]
    fn exact_division() {
        let a = uni(&[(1, 1), (0, -1)]);
        let b = uni(&[(1, 1), (0, 1)]);
        let prod = a.mul(&b).mul_monomial(&[-3], &rat(2, 3));
        assert_eq!(prod.exact_div(&a).unwrap(), b.mul_monomial(&[-3], &rat(2, 3)));
        assert!(b.exact_div(&a).is_none());
        let z = LaurentPoly::var(2, 0);
        let w = LaurentPoly::var(2, 1);
        let one = LaurentPoly::one(2);
        let f = z.sub(&one);
        let g = w.sub(&one).add(&z);
        assert_eq!(f.mul(&g).exact_div(&g).unwrap(), f);
        assert!(g.exact_div(&f).is_none());
    }

    #[test]
    fn euclidean_division_reduces_span() {
        let a = uni(&[(3, 2), (-1, 1), (0, 5)]);
        let d = uni(&[(1, 1), (0, -1)]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.is_zero() || r.span().unwrap() < d.span().unwrap());
    }

    #[test]
    fn evaluation_handles_negative_exponents() {
        let p = uni(&[(-1, 1), (2, 3)]);
        assert_eq!(p.eval(&[int(2)]), rat(1, 2) + int(12));
    }

    #[test]
    fn ring_membership() {
        assert!(RingTag::Integers.contains(&LaurentPoly::integer(3)));
        assert!(!RingTag::Integers.contains(&LaurentPoly::constant(0, rat(1, 2))));
        assert!(!RingTag::LaurentUni.contains(&LaurentPoly::integer(3)));
        assert!(!RingTag::LaurentMulti(2).is_pid());
    }
}
