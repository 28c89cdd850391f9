//! Python bindings for the zero-error capacity toolkit.
//!
//! Exposes the arithmetic primitives, perfect Lee codes and window
//! extraction, confusion graphs with the exact solvers, capacity brackets,
//! and the channel demo. Exact rationals cross the boundary as
//! `(numerator, denominator)` pairs of Python ints.

// the pyfunction expansion trips this lint on its own conversions
#![allow(clippy::useless_conversion)]

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use zec::arith::{Symbol, ZqVector};
use zec::bounds::BracketOptions;
use zec::codec::ZeroErrorCode;
use zec::error::Error;
use zec::solver::Rational;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Parse(_) | Error::UnsupportedRegime(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn ratio_pair(r: &Rational) -> (BigInt, BigInt) {
    (r.numer().clone(), r.denom().clone())
}

/// `(shift, members_in_zq, members_mapped)` as plain coordinate lists.
type WindowTriple = (Vec<u32>, Vec<Vec<u32>>, Vec<Vec<u32>>);

/// Canonical representative of `a` modulo `q`, in `[0, q-1]`.
#[pyfunction]
fn psi(a: i64, q: u32) -> PyResult<u32> {
    if q == 0 {
        return Err(PyValueError::new_err("modulus q must be >= 1"));
    }
    Ok(zec::arith::psi(a, q))
}

/// Lee absolute value of `x` modulo `q`.
#[pyfunction]
fn lee_abs(x: i64, q: u32) -> PyResult<u32> {
    if q == 0 {
        return Err(PyValueError::new_err("modulus q must be >= 1"));
    }
    Ok(zec::arith::lee_abs(x, q))
}

/// Lee distance between two vectors over `Z_q`.
#[pyfunction]
fn lee_distance(u: Vec<i64>, v: Vec<i64>, q: u32) -> PyResult<u64> {
    let u = ZqVector::new(u, q).map_err(to_py_err)?;
    let v = ZqVector::new(v, q).map_err(to_py_err)?;
    zec::arith::lee_distance(&u, &v).map_err(to_py_err)
}

/// Plain L1 distance between two symbols of the n-level alphabet.
#[pyfunction]
fn l1_distance(u: Vec<u32>, v: Vec<u32>, n: u32) -> PyResult<u64> {
    let u = Symbol::new(u, n).map_err(to_py_err)?;
    let v = Symbol::new(v, n).map_err(to_py_err)?;
    zec::arith::l1_distance(&u, &v).map_err(to_py_err)
}

/// Whether a radius-1 perfect Lee code exists over `Z_q^d`.
#[pyfunction]
fn exists_pl(d: u32, q: u32) -> PyResult<bool> {
    if d == 0 || q == 0 {
        return Err(PyValueError::new_err("d and q must be >= 1"));
    }
    Ok(zec::lee::exists_pl(d, q))
}

#[pyclass(name = "LeeCode")]
struct PyLeeCode {
    inner: zec::lee::LeeCode,
}

#[pymethods]
impl PyLeeCode {
    /// Constructs and verifies the syndrome code; needs `(2d+1) | q`.
    #[staticmethod]
    fn construct(d: u32, q: u32) -> PyResult<Self> {
        Ok(PyLeeCode {
            inner: zec::lee::construct_pl(d, q).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_codewords(d: u32, q: u32, codewords: Vec<Vec<u32>>) -> PyResult<Self> {
        let words = codewords
            .into_iter()
            .map(|c| ZqVector::from_residues(c, q))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        Ok(PyLeeCode {
            inner: zec::lee::LeeCode::new(d, q, words).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.dim()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.modulus()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn codewords(&self) -> Vec<Vec<u32>> {
        self.inner
            .codewords()
            .iter()
            .map(|c| c.coords().to_vec())
            .collect()
    }

    fn verify_perfect(&self) -> PyResult<bool> {
        self.inner.verify_perfect().map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Best window for an n-level alphabet: returns
    /// `(shift, members_in_zq, members_mapped)`.
    fn extract_window(&self, n: u32) -> PyResult<WindowTriple> {
        let w = zec::lee::extract_window(&self.inner, n).map_err(to_py_err)?;
        Ok((
            w.shift().coords().to_vec(),
            w.members_in_zq().iter().map(|v| v.coords().to_vec()).collect(),
            w.members_mapped().iter().map(|s| s.coords().to_vec()).collect(),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "LeeCode(d={}, q={}, codewords={})",
            self.inner.dim(),
            self.inner.modulus(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "ConfusionGraph")]
struct PyConfusionGraph {
    inner: zec::graph::ConfusionGraph,
}

#[pymethods]
impl PyConfusionGraph {
    /// Confusion graph of the `(d, n)` nearest-neighbor-error channel.
    #[staticmethod]
    fn nne(d: u32, n: u32) -> PyResult<Self> {
        let channel = zec::graph::build_channel(d, n).map_err(to_py_err)?;
        Ok(PyConfusionGraph {
            inner: zec::graph::build_confusion_graph(&channel).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_edges(num_vertices: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        Ok(PyConfusionGraph {
            inner: zec::graph::ConfusionGraph::from_edges(num_vertices, &edges)
                .map_err(to_py_err)?,
        })
    }

    /// k-fold strong product with itself.
    fn power(&self, k: u32) -> PyResult<Self> {
        Ok(PyConfusionGraph {
            inner: self.inner.power(k).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> PyResult<bool> {
        if u >= self.inner.num_vertices() || v >= self.inner.num_vertices() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.has_edge(u, v))
    }

    fn label(&self, v: usize) -> PyResult<Vec<u32>> {
        if v >= self.inner.num_vertices() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.label(v).to_vec())
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    /// `(alpha, witness)` for the exact maximum independent set.
    #[pyo3(signature = (budget = zec::solver::DEFAULT_NODE_BUDGET))]
    fn max_independent_set(&self, budget: u64) -> PyResult<(usize, Vec<u32>)> {
        let r = zec::solver::max_independent_set(&self.inner, budget).map_err(to_py_err)?;
        Ok((r.size, r.witness))
    }

    fn maximal_cliques(&self) -> PyResult<Vec<Vec<u32>>> {
        zec::solver::maximal_cliques(&self.inner, zec::solver::DEFAULT_CLIQUE_BUDGET)
            .map_err(to_py_err)
    }

    /// Exact fractional clique-cover optimum as `(numerator, denominator)`.
    fn clique_cover_lp(&self) -> PyResult<(BigInt, BigInt)> {
        let problem = zec::solver::LpProblem::maximal(&self.inner).map_err(to_py_err)?;
        let solution = zec::solver::solve_clique_cover_lp(&problem).map_err(to_py_err)?;
        Ok(ratio_pair(&solution.value))
    }

    fn __repr__(&self) -> String {
        format!(
            "ConfusionGraph(vertices={}, edges={})",
            self.inner.num_vertices(),
            self.inner.num_edges()
        )
    }
}

/// Capacity bracket for the `(d, n)` channel as a dict.
#[pyfunction]
#[pyo3(signature = (d, n, exact_alpha = false, lp = false, powers = vec![]))]
fn capacity_bracket(
    py: Python<'_>,
    d: u32,
    n: u32,
    exact_alpha: bool,
    lp: bool,
    powers: Vec<u32>,
) -> PyResult<Py<PyDict>> {
    let options = BracketOptions {
        exact_alpha,
        exact_lp: lp,
        alpha_powers: powers,
        ..BracketOptions::default()
    };
    let report = zec::bounds::capacity_bracket(d, n, &options).map_err(to_py_err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("d", report.d)?;
    dict.set_item("n", report.n)?;
    dict.set_item("lower_closed", report.lower_closed.clone())?;
    dict.set_item("alpha_exact", report.alpha_exact)?;
    dict.set_item("alpha_power", report.alpha_power.clone())?;
    dict.set_item("lp_exact", report.lp_exact.as_ref().map(ratio_pair))?;
    dict.set_item("upper", ratio_pair(&report.upper_closed))?;
    dict.set_item("capacity_lo_bits", report.capacity_lo_bits)?;
    dict.set_item("capacity_hi_bits", report.capacity_hi_bits)?;
    dict.set_item("flags", report.flags.clone())?;
    Ok(dict.into())
}

/// Runs seeded zero-error trials over the simulated channel; returns
/// `(trials, failures, rate_bits)`.
#[pyfunction]
#[pyo3(signature = (d, n, k = 1, trials = 10_000, seed = 0, error_rate = 0.5))]
fn demo(
    d: u32,
    n: u32,
    k: u32,
    trials: u64,
    seed: u64,
    error_rate: f64,
) -> PyResult<(u64, u64, f64)> {
    let code = ZeroErrorCode::from_channel(d, n, k).map_err(to_py_err)?;
    let summary =
        zec::codec::run_trials(&code, trials, error_rate, seed, false).map_err(to_py_err)?;
    Ok((summary.trials, summary.failures, code.rate()))
}

#[pymodule]
fn zec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(lee_abs, m)?)?;
    m.add_function(wrap_pyfunction!(lee_distance, m)?)?;
    m.add_function(wrap_pyfunction!(l1_distance, m)?)?;
    m.add_function(wrap_pyfunction!(exists_pl, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    m.add_class::<PyLeeCode>()?;
    m.add_class::<PyConfusionGraph>()?;
    Ok(())
}
