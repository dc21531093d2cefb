//! Python bindings: documents go in as JSON strings, exact results come back
//! as `fractions.Fraction` values (`float("inf")` for an infinite
//! dimension).

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use l2dim::amenability::{kesten_evidence, return_probabilities, DEFAULT_SUPPORT_BOUND};
use l2dim::burnside::{example9_table, integrality_conditions};
use l2dim::group::{FiniteGroup, FreeAbelianOracle, FreeGroupOracle, GroupOracle};
use l2dim::io::{self, IngestOptions};
use l2dim::rational::parse_rat;
use l2dim::{betti, pid, ExtDim, Rat};

fn malformed(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// `(numerator, denominator)` of an exact rational.
pub fn rat_parts(r: &Rat) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1(rat_parts(r))
}

fn ext<'py>(py: Python<'py>, e: &ExtDim) -> PyResult<Bound<'py, PyAny>> {
    match e {
        ExtDim::Finite(r) => fraction(py, r),
        ExtDim::Infinite => Ok(f64::INFINITY.into_pyobject(py)?.into_any()),
    }
}

fn fractions<'py>(py: Python<'py>, v: &[Rat]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|r| fraction(py, r)).collect()
}

/// Accepts ints, `Fraction`s and strings such as `"1/5"`.
fn to_rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    parse_rat(&x.str()?.to_cow()?).ok_or_else(|| PyValueError::new_err(format!("not a rational: {x}")))
}

/// L²-Betti numbers of a complex document.
#[pyfunction]
fn betti_numbers<'py>(py: Python<'py>, complex_json: &str) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let x = io::complex_from_str(complex_json, &IngestOptions::default()).map_err(malformed)?;
    let r = betti::betti(&x).map_err(domain)?;
    r.values.iter().map(|v| ext(py, v)).collect()
}

/// `χ⁽²⁾` of a complex document.
#[pyfunction]
fn l2_euler<'py>(py: Python<'py>, complex_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let x = io::complex_from_str(complex_json, &IngestOptions::default()).map_err(malformed)?;
    fraction(py, &x.l2_euler_characteristic().map_err(domain)?.chi)
}

/// Extended dimension of a module presentation document.
#[pyfunction]
fn extended_dimension<'py>(py: Python<'py>, module_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let doc = io::module_from_str(module_json).map_err(malformed)?;
    ext(py, &pid::extended_dimension(&doc.module).map_err(domain)?)
}

type Matrix<'py> = Vec<Vec<Bound<'py, PyAny>>>;

/// Character matrix of a subgroup table document, in canonical class order.
#[pyfunction]
fn character_matrix<'py>(py: Python<'py>, table_json: &str) -> PyResult<(Vec<String>, Matrix<'py>)> {
    let t = io::table_from_str(table_json, &IngestOptions::default()).map_err(malformed)?;
    let ids = t.classes().iter().map(|c| c.id.clone()).collect();
    let rows = t.character_matrix().iter().map(|r| fractions(py, r)).collect::<PyResult<_>>()?;
    Ok((ids, rows))
}

/// `(passes, ξ)` for the character vector `eta`.
#[pyfunction]
fn integrality<'py>(
    py: Python<'py>,
    table_json: &str,
    eta: Vec<Bound<'py, PyAny>>,
) -> PyResult<(bool, Vec<Bound<'py, PyAny>>)> {
    let t = io::table_from_str(table_json, &IngestOptions::default()).map_err(malformed)?;
    let eta = eta.iter().map(to_rat).collect::<PyResult<Vec<_>>>()?;
    let r = integrality_conditions(&t, &eta).map_err(domain)?;
    Ok((r.pass, fractions(py, &r.preimage)?))
}

/// Subgroup data of `Zⁿ ⋊ Z/p` with `r` classes of order `p`.
#[pyfunction]
fn example9<'py>(py: Python<'py>, n: usize, p: u64, r: usize) -> PyResult<Bound<'py, PyDict>> {
    let e = example9_table(n, p, r).map_err(domain)?;
    let d = PyDict::new(py);
    let coefficients = PyDict::new(py);
    for (k, v) in &e.element.coefficients {
        coefficients.set_item(k, fraction(py, v)?)?;
    }
    d.set_item("element", coefficients)?;
    d.set_item("global_character", fractions(py, &e.global_character)?)?;
    d.set_item("l2_euler", fraction(py, &e.l2_euler)?)?;
    d.set_item("conditions", e.conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    Ok(d)
}

fn walk<'py, O: GroupOracle>(py: Python<'py>, o: &O, gens: &[O::Elem], steps: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &return_probabilities(o, gens, steps, DEFAULT_SUPPORT_BOUND).map_err(domain)?)
}

fn standard_abelian(rank: usize) -> Vec<Vec<i64>> {
    (0..rank)
        .flat_map(|i| {
            let mut e = vec![0; rank];
            e[i] = 1;
            let minus = e.iter().map(|x| -x).collect();
            [e, minus]
        })
        .collect()
}

/// `[p₂, …, p_{2N}]` for the standard generators of `family` in
/// `{"free", "free_abelian", "cyclic"}`.
#[pyfunction]
fn return_probs<'py>(py: Python<'py>, family: &str, rank: usize, steps: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    match family {
        "free" => {
            let f = FreeGroupOracle { rank };
            walk(py, &f, &f.standard_generators(), steps)
        }
        "free_abelian" => walk(py, &FreeAbelianOracle { rank }, &standard_abelian(rank), steps),
        "cyclic" if rank >= 2 => {
            let g = FiniteGroup::cyclic(rank);
            let gens: Vec<usize> = if rank == 2 { vec![1] } else { vec![1, rank - 1] };
            walk(py, &g, &gens, steps)
        }
        _ => Err(PyValueError::new_err(format!("unknown family {family:?} of rank {rank}"))),
    }
}

/// Kesten report for the free or free abelian group, as a JSON string.
#[pyfunction]
fn kesten(family: &str, rank: usize, steps: usize, margin: &Bound<'_, PyAny>) -> PyResult<String> {
    let margin = to_rat(margin)?;
    let report = match family {
        "free" => {
            let f = FreeGroupOracle { rank };
            kesten_evidence(&f, &f.standard_generators(), steps, &margin, DEFAULT_SUPPORT_BOUND)
        }
        "free_abelian" => {
            kesten_evidence(&FreeAbelianOracle { rank }, &standard_abelian(rank), steps, &margin, DEFAULT_SUPPORT_BOUND)
        }
        _ => return Err(PyValueError::new_err(format!("unknown family {family:?}"))),
    }
    .map_err(domain)?;
    Ok(io::kesten_report_to_json(&report).to_string())
}

#[pymodule]
fn pyl2dim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(l2_euler, m)?)?;
    m.add_function(wrap_pyfunction!(extended_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(character_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(integrality, m)?)?;
    m.add_function(wrap_pyfunction!(example9, m)?)?;
    m.add_function(wrap_pyfunction!(return_probs, m)?)?;
    m.add_function(wrap_pyfunction!(kesten, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_split_into_parts() {
        let r = Rat::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(rat_parts(&r), (BigInt::from(-3), BigInt::from(2)));
    }
}
