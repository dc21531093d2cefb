//! L²-Betti numbers for the executable group families, the dimension-zero
//! value and the integrality check `d · b_p ∈ Z`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gcw::{GammaCWComplex, GcwError};
use crate::group::GroupSpec;
use crate::linalg::{chain_homology_ranks, fraction_field_rank};
use crate::pid::FgModulePresentation;
use crate::rational::{is_integer, ExtDim, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    FiniteGroup,
    FreeAbelian,
    FreeGroup1Dim,
    DimZeroOnly,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BettiReport {
    pub group: String,
    /// `b_p` for `p = 0, …, dim X`; only `b₀` for [`Engine::DimZeroOnly`].
    pub values: Vec<ExtDim>,
    pub engine: Engine,
    /// Least common multiple of the orders of finite subgroups.
    pub d: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BettiError {
    #[error("wrong engine: {0}")]
    WrongEngine(String),
    #[error("complex of dimension {0} is beyond the free-group engine")]
    DimensionTooHigh(usize),
    #[error("the free-group engine needs the complex declared connected")]
    NotConnected,
    #[error("b_0 from the group alone needs a connected complex")]
    Disconnected,
    #[error("no L²-Betti engine for {0}")]
    NoEngine(String),
    #[error(transparent)]
    Complex(#[from] GcwError),
}

fn rat_over(n: usize, d: usize) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `b_p = dim_Q H_p(X; Q) / |Γ|`.
pub fn betti_finite(x: &GammaCWComplex) -> Result<BettiReport, BettiError> {
    let GroupSpec::Finite(g) = x.group() else {
        return Err(BettiError::WrongEngine(format!("{} is not finite", x.group().summary())));
    };
    let plain = x.expand_to_plain_complex()?;
    let values = chain_homology_ranks(&plain.chain)
        .into_iter()
        .map(|r| ExtDim::Finite(rat_over(r, g.order())))
        .collect();
    Ok(BettiReport { group: x.group().summary(), values, engine: Engine::FiniteGroup, d: g.order() })
}

/// `b_p = rank` over `Q(z₁,…,zₙ)` of the cellular homology over `Q[Zⁿ]`.
pub fn betti_free_abelian(x: &GammaCWComplex) -> Result<BettiReport, BettiError> {
    if !matches!(x.group(), GroupSpec::FreeAbelian { .. } | GroupSpec::Free { rank: 1 }) {
        return Err(BettiError::WrongEngine(format!("{} is not free abelian", x.group().summary())));
    }
    let chain = x.laurent_chain_complex()?;
    let values = chain_homology_ranks(&chain).into_iter().map(ExtDim::from_int).collect();
    Ok(BettiReport { group: x.group().summary(), values, engine: Engine::FreeAbelian, d: 1 })
}

/// For a connected free 1-dimensional complex over `F_k`, `k ≥ 2`:
/// `b₀ = 0` and `b₁ = #edge orbits − #vertex orbits`.
pub fn betti_free_group_1dim(x: &GammaCWComplex) -> Result<BettiReport, BettiError> {
    match x.group() {
        GroupSpec::Free { rank } if *rank >= 2 => {}
        GroupSpec::Free { .. } => {
            return Err(BettiError::WrongEngine("F_1 is handled by the free abelian engine".into()))
        }
        other => return Err(BettiError::WrongEngine(format!("{} is not free", other.summary()))),
    }
    x.validated()?;
    if let Some(d) = x.dimension().filter(|&d| d > 1) {
        return Err(BettiError::DimensionTooHigh(d));
    }
    if !x.connected() {
        return Err(BettiError::NotConnected);
    }
    if let Some(c) = x.cells().iter().find(|c| !c.stabilizer.is_trivial()) {
        return Err(GcwError::NontrivialStabilizer(c.id.clone()).into());
    }
    let counts = x.orbit_counts();
    let vertices = counts.first().copied().unwrap_or(0) as i64;
    let edges = counts.get(1).copied().unwrap_or(0) as i64;
    let values = vec![ExtDim::zero(), ExtDim::Finite(Rat::from_integer((edges - vertices).into()))];
    Ok(BettiReport { group: x.group().summary(), values, engine: Engine::FreeGroup1Dim, d: 1 })
}

/// Picks the engine for the group of `x`. Complexes over `F_k` of dimension
/// above 1 get only `b₀`.
pub fn betti(x: &GammaCWComplex) -> Result<BettiReport, BettiError> {
    match x.group() {
        GroupSpec::Finite(_) => betti_finite(x),
        GroupSpec::FreeAbelian { .. } | GroupSpec::Free { rank: 1 } => betti_free_abelian(x),
        GroupSpec::Free { .. } if x.dimension().unwrap_or(0) <= 1 => betti_free_group_1dim(x),
        GroupSpec::Free { .. } => {
            x.validated()?;
            Ok(BettiReport {
                group: x.group().summary(),
                values: vec![betti_zeroth(x.group(), x.connected())?],
                engine: Engine::DimZeroOnly,
                d: 1,
            })
        }
        GroupSpec::Declared { name } => Err(BettiError::NoEngine(name.clone())),
    }
}

/// `b₀ = |Γ|⁻¹` for connected complexes, `0` when `Γ` is infinite.
pub fn betti_zeroth(group: &GroupSpec, connected: bool) -> Result<ExtDim, BettiError> {
    if !connected {
        return Err(BettiError::Disconnected);
    }
    match group {
        GroupSpec::Finite(g) => Ok(ExtDim::Finite(rat_over(1, g.order()))),
        GroupSpec::FreeAbelian { .. } | GroupSpec::Free { .. } => Ok(ExtDim::zero()),
        GroupSpec::Declared { name } => Err(BettiError::NoEngine(name.clone())),
    }
}

/// `dim(N(Zⁿ) ⊗ M)` for a finitely presented `Q[Zⁿ]`-module: its generic
/// rank `n − rank(relations)`.
pub fn dimension_of_induced_module(m: &FgModulePresentation) -> ExtDim {
    ExtDim::from_int(m.generator_count() - fraction_field_rank(m.relations()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityVerdict {
    pub holds: bool,
    /// Degrees `p` with `d · b_p ∉ Z`.
    pub witnesses: Vec<usize>,
}

pub fn integrality_verdict(report: &BettiReport) -> IntegralityVerdict {
    let d = Rat::from_integer(BigInt::from(report.d));
    let witnesses: Vec<usize> = report
        .values
        .iter()
        .enumerate()
        .filter_map(|(p, v)| match v {
            ExtDim::Finite(b) if !is_integer(&(b * &d)) => Some(p),
            _ => None,
        })
        .collect();
    IntegralityVerdict { holds: witnesses.is_empty(), witnesses }
}

/// `Σ (−1)^p b_p`, `None` if some value is infinite.
pub fn alternating_betti_sum(values: &[ExtDim]) -> Option<Rat> {
    let mut acc = Rat::zero();
    for (p, v) in values.iter().enumerate() {
        let b = v.finite()?;
        if p % 2 == 0 {
            acc += b;
        } else {
            acc -= b;
        }
    }
    Some(acc)
}
