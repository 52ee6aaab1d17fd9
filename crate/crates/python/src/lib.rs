//! Python bindings. Build with `maturin develop --features extension-module`.

use cginibre::geometry::{self, ModelParams, Regime};
use cginibre::painleve::{self, TWSolution};
use cginibre::{exact, freeenergy, ldp, opasymp};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::sync::OnceLock;

fn err(e: cginibre::Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn tw_default() -> PyResult<&'static TWSolution> {
    static SOL: OnceLock<Result<TWSolution, cginibre::Error>> = OnceLock::new();
    SOL.get_or_init(|| painleve::hastings_mcleod(-12.0, 8.0, 1e-12)).as_ref().map_err(|e| err(e.clone()))
}

/// "post", "pre" or "critical".
#[pyfunction]
#[pyo3(signature = (a, c, tol = geometry::TAU))]
fn classify(a: f64, c: f64, tol: f64) -> PyResult<String> {
    geometry::classify(a, c, tol).map(|r| r.to_string()).map_err(err)
}

#[pyfunction]
fn a_cri(c: f64) -> f64 {
    geometry::a_cri(c)
}

/// Conformal-map data for the current regime as a dict.
#[pyfunction]
fn geometry_data<'py>(py: Python<'py>, a: f64, c: f64) -> PyResult<Bound<'py, PyDict>> {
    let p = ModelParams::new(a, c).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("regime", p.regime.to_string())?;
    match p.regime {
        Regime::Pre => {
            let g = geometry::pre_geometry(a, c).map_err(err)?;
            d.set_item("q", g.q)?;
            d.set_item("R", g.r)?;
            d.set_item("kappa", g.kappa)?;
            d.set_item("beta", g.beta)?;
            d.set_item("b", g.b)?;
        }
        _ => {
            let g = geometry::post_geometry(a, c).map_err(err)?;
            d.set_item("outer_radius", g.outer_radius)?;
            d.set_item("inner_center", g.inner_center)?;
            d.set_item("inner_radius", g.inner_radius)?;
            d.set_item("beta", g.beta)?;
            d.set_item("b", g.b)?;
        }
    }
    Ok(d)
}

#[pyfunction]
fn energy(a: f64, c: f64) -> PyResult<f64> {
    let p = ModelParams::new(a, c).map_err(err)?;
    freeenergy::energy(a, c, p.regime).map_err(err)
}

/// Large-N expansion of log Z_N with `order` Bernoulli pairs in the tail.
#[pyfunction]
#[pyo3(signature = (n, a, c, order = 2))]
fn log_z_asymptotic(n: u64, a: f64, c: f64, order: usize) -> PyResult<f64> {
    let p = ModelParams::new(a, c).map_err(err)?;
    Ok(freeenergy::expansion(n, a, c, p.regime, order).map_err(err)?.value)
}

/// Exact log Z_N with charge m = cN.
#[pyfunction]
#[pyo3(signature = (n, m, a, bits = 256))]
fn log_z_exact(n: usize, m: usize, a: f64, bits: u32) -> PyResult<f64> {
    let ctx = exact::ExactContext::new(n, m, a, bits).map_err(err)?;
    Ok(exact::exact_logz(&ctx).map_err(err)?.to_f64())
}

/// Relative residual of the LUE gap / partition function identity at x.
#[pyfunction]
#[pyo3(signature = (n, m, x, bits = 256))]
fn duality_residual(n: usize, m: usize, x: f64, bits: u32) -> PyResult<f64> {
    Ok(exact::duality_residual(n, m, x, bits).map_err(err)?.to_f64())
}

/// F_TW(t) from a cached Hastings-McLeod solution on [-12, 8].
#[pyfunction]
fn tw_cdf(t: f64) -> PyResult<f64> {
    tw_default()?.cdf(t).map_err(err)
}

#[pyfunction]
fn hm_q(s: f64) -> PyResult<f64> {
    tw_default()?.hm_q(s).map_err(err)
}

/// Critical-window value of log Z_N at a = a_cri - s * scale * N^(-2/3).
#[pyfunction]
fn log_z_critical(n: u64, c: f64, s: f64) -> PyResult<f64> {
    Ok(painleve::critical_expansion(tw_default()?, n, c, s).map_err(err)?.value)
}

#[pyfunction]
fn ldp_rate(t: f64, alpha: f64) -> PyResult<f64> {
    ldp::phi(t, alpha).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, alpha, t, with_constant = true))]
fn ldp_log_probability(n: u64, alpha: f64, t: f64, with_constant: bool) -> PyResult<f64> {
    Ok(ldp::ldp_log_probability(n, alpha, t, with_constant).map_err(err)?.value)
}

/// Asymptotic monic orthogonal polynomial p_N(z) outside the droplet.
#[pyfunction]
fn op_asymptotic(a: f64, c: f64, n: u64, z: Complex64) -> PyResult<Complex64> {
    let p = ModelParams::new(a, c).map_err(err)?;
    let ge = opasymp::GEvaluator::new(p).map_err(err)?;
    Ok(opasymp::p_asymp(&ge, z, n).map_err(err)?.value)
}

/// Exact p_N(z) with m = cN.
#[pyfunction]
#[pyo3(signature = (n, m, a, z, bits = 768))]
fn op_exact(n: usize, m: usize, a: f64, z: Complex64, bits: u32) -> PyResult<Complex64> {
    let ctx = exact::ExactContext::new(n, m, a, bits).map_err(err)?;
    let coeffs = exact::exact_op(&ctx).map_err(err)?;
    Ok(exact::eval_poly(&coeffs, z, bits))
}

#[pymodule]
fn _core(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(a_cri, m)?)?;
    m.add_function(wrap_pyfunction!(geometry_data, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(log_z_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(log_z_exact, m)?)?;
    m.add_function(wrap_pyfunction!(duality_residual, m)?)?;
    m.add_function(wrap_pyfunction!(tw_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(hm_q, m)?)?;
    m.add_function(wrap_pyfunction!(log_z_critical, m)?)?;
    m.add_function(wrap_pyfunction!(ldp_rate, m)?)?;
    m.add_function(wrap_pyfunction!(ldp_log_probability, m)?)?;
    m.add_function(wrap_pyfunction!(op_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(op_exact, m)?)?;
    Ok(())
}
