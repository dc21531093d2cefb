//! Exact rational values and the extended dimension type.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/4"` or a finite decimal such as `"0.125"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rat::new(n, d));
    }
    BigInt::from_str(s).ok().map(Rat::from_integer)
}

/// Natural logarithm of a positive rational, in floating point. Used only for
/// human-readable decimal renderings, never for decisions.
pub fn ln_rat(r: &Rat) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Extended nonnegative value: a finite rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtDim {
    Finite(Rat),
    Infinite,
}

impl ExtDim {
    pub fn zero() -> Self {
        ExtDim::Finite(Rat::zero())
    }

    pub fn from_int(n: usize) -> Self {
        ExtDim::Finite(Rat::from_integer(BigInt::from(n)))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtDim::Finite(r) => Some(r),
            ExtDim::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtDim::Infinite)
    }
}

impl From<Rat> for ExtDim {
    fn from(r: Rat) -> Self {
        ExtDim::Finite(r)
    }
}

impl Add for ExtDim {
    type Output = ExtDim;
    fn add(self, rhs: ExtDim) -> ExtDim {
        match (self, rhs) {
            (ExtDim::Finite(a), ExtDim::Finite(b)) => ExtDim::Finite(a + b),
            _ => ExtDim::Infinite,
        }
    }
}

impl PartialOrd for ExtDim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDim {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDim::Finite(a), ExtDim::Finite(b)) => a.cmp(b),
            (ExtDim::Finite(_), ExtDim::Infinite) => Ordering::Less,
            (ExtDim::Infinite, ExtDim::Finite(_)) => Ordering::Greater,
            (ExtDim::Infinite, ExtDim::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDim::Finite(r) => write!(f, "{r}"),
            ExtDim::Infinite => f.write_str("inf"),
        }
    }
}

/// JSON helpers: rationals travel as `[num, den]`, integers beyond 2^53 as
/// decimal strings, `+∞` as `"inf"`.
pub mod json {
    use super::*;
    use serde_json::Value;

    const SAFE: i64 = 1 << 53;

    pub fn int_to_json(n: &BigInt) -> Value {
        match n.to_i64() {
            Some(v) if (-SAFE..=SAFE).contains(&v) => Value::from(v),
            _ => Value::String(n.to_string()),
        }
    }

    pub fn int_from_json(v: &Value) -> Option<BigInt> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => BigInt::from_str(s.trim()).ok(),
            _ => None,
        }
    }

    pub fn rat_to_json(r: &Rat) -> Value {
        Value::Array(vec![int_to_json(r.numer()), int_to_json(r.denom())])
    }

    pub fn rat_from_json(v: &Value) -> Option<Rat> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                let n = int_from_json(&parts[0])?;
                let d = int_from_json(&parts[1])?;
                if d.is_zero() {
                    None
                } else {
                    Some(Rat::new(n, d))
                }
            }
            Value::Number(_) => int_from_json(v).map(Rat::from_integer),
            Value::String(s) => parse_rat(s),
            _ => None,
        }
    }

    pub fn ext_to_json(e: &ExtDim) -> Value {
        match e {
            ExtDim::Finite(r) => rat_to_json(r),
            ExtDim::Infinite => Value::String("inf".into()),
        }
    }

    pub fn ext_from_json(v: &Value) -> Option<ExtDim> {
        match v {
            Value::String(s) if s == "inf" => Some(ExtDim::Infinite),
            _ => rat_from_json(v).map(ExtDim::Finite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("0.1"), Some(rat(1, 10)));
        assert_eq!(parse_rat("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rat("1/5"), Some(rat(1, 5)));
        assert_eq!(parse_rat("7"), Some(int(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn ext_order_and_sum() {
        assert!(ExtDim::Infinite > ExtDim::from_int(10));
        assert_eq!(ExtDim::from_int(1) + ExtDim::Infinite, ExtDim::Infinite);
        assert_eq!(ExtDim::from(rat(1, 2)) + ExtDim::from(rat(1, 2)), ExtDim::from_int(1));
    }

    #[test]
    fn big_integers_serialize_as_strings() {
        let big = BigInt::from(1u64 << 60);
        assert_eq!(json::int_to_json(&big), serde_json::json!("1152921504606846976"));
        let r = Rat::new(big.clone(), BigInt::from(3));
        assert_eq!(json::rat_from_json(&json::rat_to_json(&r)), Some(r));
        assert_eq!(json::ext_from_json(&serde_json::json!("inf")), Some(ExtDim::Infinite));
    }

    #[test]
    fn log_of_huge_rational() {
        let r = Rat::new(num_traits::pow(BigInt::from(3), 2000), BigInt::from(1));
        let expect = 2000.0 * 3f64.ln();
        assert!((ln_rat(&r) - expect).abs() < 1e-6);
    }
}
