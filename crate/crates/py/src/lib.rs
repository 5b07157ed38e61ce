//! Python bindings: run the pipeline, verify and summarize certificates,
//! and a few of the exact helpers.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use k3g16::chow;
use k3g16::cli::certificate::Certificate;
use k3g16::cli::{self, RunConfig, Stage};
use k3g16::ffla::{FieldCtx, FqMatrix};

fn err(e: k3g16::error::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn parse_stage(name: &str) -> PyResult<Stage> {
    Stage::ALL
        .iter()
        .copied()
        .find(|s| s.name() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown stage {name}")))
}

/// Run the pipeline and return the certificate as canonical JSON.
#[pyfunction]
#[pyo3(signature = (p=101, seed=1, stages=None, model_seed=None))]
fn run(
    py: Python<'_>,
    p: u64,
    seed: u64,
    stages: Option<Vec<String>>,
    model_seed: Option<u64>,
) -> PyResult<String> {
    let mut config = RunConfig::new(p, seed);
    config.model_seed = model_seed;
    if let Some(names) = stages {
        config.stages = names
            .iter()
            .map(|n| parse_stage(n))
            .collect::<PyResult<_>>()?;
    }
    let (cert, _) = py.detach(|| cli::run(&config)).map_err(err)?;
    cert.to_json().map_err(err)
}

fn load(json: &str) -> PyResult<Certificate> {
    Certificate::from_json(json).map_err(err)
}

/// Independent re-check of a certificate: a list of (name, ok, detail).
#[pyfunction]
fn verify(json: &str) -> PyResult<Vec<(String, bool, String)>> {
    let rep = cli::verify::verify(&load(json)?).map_err(err)?;
    Ok(rep
        .items
        .into_iter()
        .map(|i| (i.name, i.ok, i.detail))
        .collect())
}

/// Text summary of a certificate.
#[pyfunction]
fn report(json: &str) -> PyResult<String> {
    Ok(cli::verify::report(&load(json)?))
}

/// Status label of one acceptance criterion in a certificate.
#[pyfunction]
fn criterion_status(json: &str, n: u8) -> PyResult<String> {
    Ok(load(json)?.criterion_status(n).label().to_string())
}

/// Rank of an integer matrix reduced mod `p`.
#[pyfunction]
fn rank_mod_p(rows: Vec<Vec<i64>>, p: u64) -> PyResult<usize> {
    let f = FieldCtx::new(p).map_err(err)?;
    let rows: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
        .collect();
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(if rows.is_empty() {
        0
    } else {
        FqMatrix::from_rows(&rows).rank(&f)
    })
}

/// Total Chern class of the tangent bundle, as coefficients of 1, x, x^2, x^3.
#[pyfunction]
fn chern_t() -> [i64; 4] {
    chow::chern_t()
}

/// `H^3` on the threefold.
#[pyfunction]
fn degree_x() -> i64 {
    chow::degree_x()
}

#[pymodule]
fn k3g16_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(criterion_status, m)?)?;
    m.add_function(wrap_pyfunction!(rank_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(chern_t, m)?)?;
    m.add_function(wrap_pyfunction!(degree_x, m)?)?;
    Ok(())
}
