//! Python bindings: `helicat.verify`, `helicat.mesh`, `helicat.profile`,
//! `helicat.run`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use helicat_core::catenoid::CatenoidRecipe;
use helicat_core::cli::{self, SpecArgs, SurfaceSpec};
use helicat_core::GeomError;

fn to_py(e: GeomError) -> PyErr {
    match e {
        GeomError::Spec(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn spec(
    kind: &str,
    params: Option<String>,
    grid: Option<String>,
    jet: Option<String>,
    tol: Option<Vec<String>>,
    seed: Option<u64>,
    samples: Option<usize>,
) -> PyResult<SurfaceSpec> {
    let args = SpecArgs {
        config: None,
        kind: Some(kind.to_string()),
        params: params.into_iter().collect(),
        grid,
        jet,
        tol: tol.unwrap_or_default(),
        seed,
        samples,
    };
    SurfaceSpec::resolve(&args).map_err(to_py)
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Verification report of a surface kind or suite, as a dict.
#[pyfunction]
#[pyo3(signature = (kind, params=None, grid=None, jet=None, tol=None, seed=None, samples=None))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    kind: &str,
    params: Option<String>,
    grid: Option<String>,
    jet: Option<String>,
    tol: Option<Vec<String>>,
    seed: Option<u64>,
    samples: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let s = spec(kind, params, grid, jet, tol, seed, samples)?;
    let report = py.detach(move || cli::verify_spec(&s)).map_err(to_py)?;
    json_loads(py, &report.to_json())
}

/// Display mesh: (vertices, faces, scalars) with zero-based faces and
/// scalar rows (theta, H, 2 theta^2 - 1).
#[pyfunction]
#[pyo3(signature = (kind, params=None, grid=None, jet=None))]
#[allow(clippy::type_complexity)]
fn mesh(
    py: Python<'_>,
    kind: &str,
    params: Option<String>,
    grid: Option<String>,
    jet: Option<String>,
) -> PyResult<(Vec<[f64; 3]>, Vec<[usize; 3]>, Vec<[f64; 3]>)> {
    let s = spec(kind, params, grid, jet, None, None, None)?;
    let m = py.detach(move || cli::build_mesh(&s)).map_err(to_py)?;
    Ok((m.vertices, m.faces, m.scalars))
}

/// Catenoid profile columns s, rho, a, theta, H_s.
#[pyfunction]
#[pyo3(signature = (kind, params=None))]
fn profile<'py>(py: Python<'py>, kind: &str, params: Option<String>) -> PyResult<Bound<'py, PyDict>> {
    let p = helicat_core::Params::parse(params.as_deref().unwrap_or("")).map_err(to_py)?;
    let kind = kind.to_string();
    let sol = py.detach(move || CatenoidRecipe::parse(&kind, &p)?.profile()).map_err(to_py)?;
    let theta: Vec<f64> = sol.s_grid.iter().map(|&s| sol.theta_at(s).unwrap_or(f64::NAN)).collect();
    let d = PyDict::new(py);
    d.set_item("s", &sol.s_grid)?;
    d.set_item("rho", &sol.rho)?;
    d.set_item("a", &sol.a)?;
    d.set_item("theta", theta)?;
    d.set_item("H_s", &sol.h_s)?;
    d.set_item("truncated", sol.truncated)?;
    Ok(d)
}

/// Run the command-line interface; returns (exit code, stdout, stderr).
#[pyfunction]
fn run(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    py.detach(|| {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("helicat".to_string()).chain(args);
        let code = cli::run(argv, &mut out, &mut err);
        (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
    })
}

#[pymodule]
fn helicat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(mesh, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
