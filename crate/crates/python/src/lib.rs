//! Python bindings.

use ::genkepler as core;
use core::model::{CutoffIndex, ProblemSpec as CoreSpec};
use core::radial::{sector_compare, RadialGrid, SectorSpec};
use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: core::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// A problem labeled by dimension, curvature and twice the magnetic charge.
#[pyclass(
    name = "ProblemSpec",
    frozen,
    module = "genkepler",
    skip_from_py_object
)]
#[derive(Clone, Copy)]
struct PySpec(CoreSpec);

#[pymethods]
impl PySpec {
    #[new]
    #[pyo3(signature = (dim, kappa, twice_mu))]
    fn new(dim: u32, kappa: f64, twice_mu: i64) -> PyResult<Self> {
        CoreSpec::new(dim, kappa, twice_mu)
            .map(PySpec)
            .map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa()
    }

    #[getter]
    fn twice_mu(&self) -> i64 {
        self.0.twice_mu()
    }

    /// I₀ as an integer, or `None` when every level is bound.
    fn cutoff_index(&self) -> Option<i64> {
        match self.0.cutoff_index() {
            CutoffIndex::Infinite => None,
            CutoffIndex::Finite(i) => Some(i),
        }
    }

    fn is_marginal(&self) -> bool {
        self.0.is_marginal()
    }

    fn energy(&self, principal: u32) -> f64 {
        core::spectrum::energy(&self.0, principal)
    }

    fn threshold_energy(&self) -> PyResult<f64> {
        core::spectrum::threshold_energy(&self.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ProblemSpec(dim={}, kappa={}, twice_mu={})",
            self.0.dim(),
            self.0.kappa(),
            self.0.twice_mu()
        )
    }
}

/// Rows `(I, nu, energy, degeneracy)` with `nu` as a `p/q` string.
#[pyfunction]
fn spectrum_table(spec: &PySpec, i_max: u32) -> Vec<(u32, String, f64, BigUint)> {
    core::spectrum::spectrum_table(&spec.0, i_max)
        .entries
        .into_iter()
        .map(|e| {
            (
                e.principal_index,
                core::format::rational(e.nu),
                e.energy,
                e.degeneracy,
            )
        })
        .collect()
}

#[pyfunction]
fn spectrum_csv(spec: &PySpec, i_max: u32) -> String {
    core::spectrum::spectrum_table(&spec.0, i_max).to_csv()
}

#[pyfunction]
fn degeneracy(spec: &PySpec, l: u32) -> BigUint {
    core::reptheory::degeneracy(&spec.0, l)
}

/// `(dim of the total representation, sum of sector degeneracies)`.
#[pyfunction]
fn branching_check(spec: &PySpec, principal: u32) -> (BigUint, BigUint) {
    let r = core::reptheory::branching_check(&spec.0, principal);
    (r.total_dimension, r.sector_sum)
}

#[pyfunction]
fn c_identity_holds(spec: &PySpec, l: u32) -> bool {
    core::reptheory::c_identity_check(&spec.0, l).holds()
}

/// `(k, I, lambda_fd, lambda_shoot, E_closed, bound)`.
type LevelRow = (u32, u32, f64, f64, f64, bool);

/// Comparison rows of one sector.
#[pyfunction]
#[pyo3(signature = (spec, l, count, n_points=None, x_max=None))]
fn sector_levels(
    py: Python<'_>,
    spec: &PySpec,
    l: u32,
    count: u32,
    n_points: Option<usize>,
    x_max: Option<f64>,
) -> PyResult<Vec<LevelRow>> {
    let spec = spec.0;
    py.detach(move || {
        let sector = SectorSpec::new(spec, l);
        let grid = match n_points {
            Some(n) => RadialGrid::for_sector(&sector, count, n, x_max)?,
            None => RadialGrid::auto(&sector, count, x_max)?,
        };
        let report = sector_compare(&sector, count, &grid)?;
        Ok(report
            .rows
            .iter()
            .map(|r| {
                (
                    r.k,
                    r.principal,
                    r.lambda_fd,
                    r.lambda_shoot,
                    r.energy_closed,
                    r.bound,
                )
            })
            .collect())
    })
    .map_err(to_py)
}

/// `(id, name, passed, detail)` for each acceptance criterion.
#[pyfunction]
#[pyo3(signature = (quick=true))]
fn verify(py: Python<'_>, quick: bool) -> Vec<(u32, String, bool, String)> {
    py.detach(move || {
        core::verify::run_all(quick)
            .into_iter()
            .map(|r| (r.id, r.name.to_string(), r.passed, r.detail))
            .collect()
    })
}

#[pymodule]
fn genkepler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(spectrum_table, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_csv, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(branching_check, m)?)?;
    m.add_function(wrap_pyfunction!(c_identity_holds, m)?)?;
    m.add_function(wrap_pyfunction!(sector_levels, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
