//! Python bindings. Systems are passed as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use selfsim::io::SystemFile;
use selfsim::props::{report, ScopeMode};
use selfsim::System;

fn err(e: selfsim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Validator violations; empty when the system is valid.
#[pyfunction]
fn validate(system_json: &str) -> PyResult<Vec<String>> {
    Ok(SystemFile::parse(system_json).map_err(err)?.validate().violations)
}

/// Condition report as JSON text; `scope` is "model" or "strict".
#[pyfunction]
#[pyo3(signature = (system_json, scope = "model"))]
fn report_json(system_json: &str, scope: &str) -> PyResult<String> {
    let mode = match scope {
        "model" => ScopeMode::Model,
        "strict" => ScopeMode::Strict,
        other => return Err(PyValueError::new_err(format!("unknown scope `{other}`"))),
    };
    let s = System::from_json(system_json).map_err(err)?;
    Ok(report(&s.action, s.twist.as_ref(), mode, s.name()).to_json())
}

/// Names of the nucleus elements.
#[pyfunction]
fn nucleus(system_json: &str) -> PyResult<Vec<String>> {
    let s = System::from_json(system_json).map_err(err)?;
    let a = &s.action;
    Ok(a.nucleus().map_err(err)?.into_iter().map(|g| a.model.name(g).to_string()).collect())
}

/// Runs the command-line front end; returns (exit code, stdout, stderr).
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = std::iter::once("selfsim".to_string()).chain(args);
    let code = selfsim::cli::run(argv, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
fn selfsim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(report_json, m)?)?;
    m.add_function(wrap_pyfunction!(nucleus, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
