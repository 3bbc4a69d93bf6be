//! Python module `dwalg`. Field elements cross the boundary as strings and
//! operators as their JSON encoding.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dwalg::centralizer::centralizer_truncated;
use dwalg::cli::{execute, Cli};
use dwalg::dwalgebra::{center, center_decompose, decompose};
use dwalg::exactfield::Rat;
use dwalg::gegenbauer::{generators, gram_entry, monic_mop_closed};
use dwalg::json::{diffop_from_json, diffop_to_json, matpoly_to_json};
use dwalg::presented::{CubicRule, Presentation, Word};

fn py_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rat> {
    s.parse().map_err(py_err)
}

/// `D1..D4` for `j = 1..4` as operator JSON.
#[pyfunction]
fn generator(j: usize) -> PyResult<String> {
    if !(1..=4).contains(&j) {
        return Err(PyValueError::new_err(format!("no generator D{j}")));
    }
    Ok(diffop_to_json(generators().get(j)))
}

/// `C1` or `C2` (`k = 1, 2`) as operator JSON.
#[pyfunction]
fn center_generator(k: usize) -> PyResult<String> {
    let (c1, c2) = center();
    match k {
        1 => Ok(diffop_to_json(c1)),
        2 => Ok(diffop_to_json(c2)),
        _ => Err(PyValueError::new_err(format!("no center generator C{k}"))),
    }
}

/// `Q_w` as matrix-polynomial JSON, symbolic in `p`, `n`.
#[pyfunction]
fn monic_mop(w: usize) -> String {
    matpoly_to_json(&monic_mop_closed(w).poly)
}

/// Span decomposition of an operator, as JSON.
#[pyfunction]
fn decompose_op(op_json: &str) -> PyResult<String> {
    let dec = decompose(&diffop_from_json(op_json).map_err(py_err)?).map_err(py_err)?;
    serde_json::to_string(&dec).map_err(py_err)
}

/// `p(C1) + q(C1) C2` decomposition of a central operator, as JSON.
#[pyfunction]
fn center_decompose_op(op_json: &str) -> PyResult<String> {
    let dec = center_decompose(&diffop_from_json(op_json).map_err(py_err)?).map_err(py_err)?;
    serde_json::to_string(&dec).map_err(py_err)
}

/// Normal form of a word in `A`, `B`: four polynomials in `alpha`, as
/// ascending coefficient lists.
#[pyfunction]
#[pyo3(signature = (word, corrected = false))]
fn normal_form(word: &str, corrected: bool) -> PyResult<Vec<Vec<String>>> {
    let w: Word = word.parse().map_err(py_err)?;
    let rule = if corrected {
        CubicRule::Corrected
    } else {
        CubicRule::AsStated
    };
    let x = Presentation::new(rule).normal_form(&w);
    Ok(x.m
        .iter()
        .map(|u| u.coeffs().iter().map(|c| c.to_string()).collect())
        .collect())
}

/// Gram block `(Q_i, Q_j)` at numeric `n`, `p`, as rows of strings.
#[pyfunction]
fn gram(i: usize, j: usize, n: &str, p: &str) -> PyResult<Vec<Vec<String>>> {
    let g = gram_entry(i, j, &rat(n)?, &rat(p)?).map_err(py_err)?;
    Ok(g.rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect())
        .collect())
}

/// Dimension of the centralizer of `C1` in order `<= s`, degree `<= d`.
#[pyfunction]
fn centralizer_dimension(s: usize, d: usize) -> PyResult<usize> {
    let (c1, _) = center();
    Ok(centralizer_truncated(std::slice::from_ref(c1), s, d)
        .map_err(py_err)?
        .dimension)
}

/// Runs a command-line invocation (without the program name) and returns
/// its JSON report.
#[pyfunction]
fn report(args: Vec<String>) -> PyResult<String> {
    use pyo3::exceptions::PyRuntimeError;
    let argv = std::iter::once("dwalg".to_string()).chain(args);
    let cli = Cli::from_args(argv).map_err(py_err)?;
    let r = execute(&cli.command).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    serde_json::to_string(&r).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "dwalg")]
fn dwalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(generator, m)?)?;
    m.add_function(wrap_pyfunction!(center_generator, m)?)?;
    m.add_function(wrap_pyfunction!(monic_mop, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_op, m)?)?;
    m.add_function(wrap_pyfunction!(center_decompose_op, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(gram, m)?)?;
    m.add_function(wrap_pyfunction!(centralizer_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
