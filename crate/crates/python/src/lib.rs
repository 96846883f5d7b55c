//! Python bindings: `import jqdiscord`.

use jqdiscord::correlations as corr;
use jqdiscord::device;
use jqdiscord::sweep::{self, Figure};
use jqdiscord::{ComplexMatrix, DensityMatrix, Error, Subsystem, C64};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Bracket(_) | Error::NoConvergence(_) | Error::Consistency(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_side(side: &str) -> PyResult<Subsystem> {
    match side {
        "first" | "a" => Ok(Subsystem::First),
        "second" | "b" => Ok(Subsystem::Second),
        other => Err(PyValueError::new_err(format!(
            "side must be 'first' or 'second', got {other:?}"
        ))),
    }
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| m.get(r, c)).collect())
        .collect()
}

/// Hamiltonian coefficients in kelvin.
#[pyclass(name = "EffectiveParams", module = "jqdiscord", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyEffectiveParams(device::EffectiveParams);

#[pymethods]
impl PyEffectiveParams {
    #[new]
    #[pyo3(signature = (eps1, eps2, j12, ej1 = 0.0, ej2 = 0.0))]
    fn new(eps1: f64, eps2: f64, j12: f64, ej1: f64, ej2: f64) -> PyResult<Self> {
        let p = device::EffectiveParams { eps1, eps2, ej1, ej2, j12 };
        p.validate().map_err(to_py)?;
        Ok(Self(p))
    }

    /// `ε₁ = ε₂ = eps`, no intrabit tunnelling.
    #[staticmethod]
    fn symmetric(eps: f64, j: f64) -> Self {
        Self(device::EffectiveParams::symmetric(eps, j))
    }

    #[getter]
    fn eps1(&self) -> f64 {
        self.0.eps1
    }
    #[getter]
    fn eps2(&self) -> f64 {
        self.0.eps2
    }
    #[getter]
    fn ej1(&self) -> f64 {
        self.0.ej1
    }
    #[getter]
    fn ej2(&self) -> f64 {
        self.0.ej2
    }
    #[getter]
    fn j12(&self) -> f64 {
        self.0.j12
    }

    /// 4×4 Hamiltonian as nested lists of complex numbers.
    fn hamiltonian(&self) -> Vec<Vec<C64>> {
        matrix_rows(&device::build_hamiltonian(&self.0))
    }

    fn __repr__(&self) -> String {
        let p = self.0;
        format!(
            "EffectiveParams(eps1={}, eps2={}, j12={}, ej1={}, ej2={})",
            p.eps1, p.eps2, p.j12, p.ej1, p.ej2
        )
    }
}

/// Circuit controls (SI units, fluxes in units of Φ₀).
#[pyclass(name = "DeviceParams", module = "jqdiscord", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyDeviceParams(device::DeviceParams);

#[pymethods]
impl PyDeviceParams {
    #[new]
    #[pyo3(signature = (*, l_h = None, c_f = None, c_j0_f = None, e_j0_k = None, n = None,
        v_x1_v = None, v_x2_v = None, phi_e = None, phi_x1 = None, phi_x2 = None, xi = None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        l_h: Option<f64>,
        c_f: Option<f64>,
        c_j0_f: Option<f64>,
        e_j0_k: Option<f64>,
        n: Option<i64>,
        v_x1_v: Option<f64>,
        v_x2_v: Option<f64>,
        phi_e: Option<f64>,
        phi_x1: Option<f64>,
        phi_x2: Option<f64>,
        xi: Option<f64>,
    ) -> PyResult<Self> {
        let d = device::DeviceParams::default();
        let p = device::DeviceParams {
            l_h: l_h.unwrap_or(d.l_h),
            c_f: c_f.unwrap_or(d.c_f),
            c_j0_f: c_j0_f.unwrap_or(d.c_j0_f),
            e_j0_k: e_j0_k.unwrap_or(d.e_j0_k),
            n: n.unwrap_or(d.n),
            v_x1_v: v_x1_v.unwrap_or(d.v_x1_v),
            v_x2_v: v_x2_v.unwrap_or(d.v_x2_v),
            phi_e: phi_e.unwrap_or(d.phi_e),
            phi_x1: phi_x1.unwrap_or(d.phi_x1),
            phi_x2: phi_x2.unwrap_or(d.phi_x2),
            xi: xi.unwrap_or(d.xi),
        };
        p.validate().map_err(to_py)?;
        Ok(Self(p))
    }

    fn effective(&self) -> PyResult<PyEffectiveParams> {
        self.0.effective().map(PyEffectiveParams).map_err(to_py)
    }

    #[getter]
    fn v_x1_v(&self) -> f64 {
        self.0.v_x1_v
    }
    #[getter]
    fn v_x2_v(&self) -> f64 {
        self.0.v_x2_v
    }
    #[getter]
    fn phi_x1(&self) -> f64 {
        self.0.phi_x1
    }
    #[getter]
    fn phi_x2(&self) -> f64 {
        self.0.phi_x2
    }
    #[getter]
    fn e_j0_k(&self) -> f64 {
        self.0.e_j0_k
    }
}

/// Validated two-qubit density matrix.
#[pyclass(name = "DensityMatrix", module = "jqdiscord", skip_from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix(DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    /// From a 4×4 nested sequence of complex numbers; rejects non-states.
    #[new]
    fn new(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = ComplexMatrix::from_row_major(dim, rows.into_iter().flatten().collect())
            .map_err(to_py)?;
        DensityMatrix::new(m).map(Self).map_err(to_py)
    }

    fn to_list(&self) -> Vec<Vec<C64>> {
        matrix_rows(self.0.matrix())
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }
}

#[pyclass(name = "CorrelationReport", module = "jqdiscord", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCorrelationReport {
    mutual_information: f64,
    classical_correlation: f64,
    discord: f64,
    concurrence: f64,
    eof: f64,
    theta_opt: f64,
    phi_opt: f64,
}

#[pymethods]
impl PyCorrelationReport {
    fn __repr__(&self) -> String {
        format!(
            "CorrelationReport(mutual_information={}, classical_correlation={}, discord={}, concurrence={}, eof={})",
            self.mutual_information, self.classical_correlation, self.discord, self.concurrence, self.eof
        )
    }
}

#[pyclass(name = "CriticalPoint", module = "jqdiscord", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCriticalPoint {
    kind: String,
    location: f64,
    value_at: f64,
    bracket: (f64, f64),
    iterations: usize,
    boundary: bool,
}

impl From<sweep::CriticalPoint> for PyCriticalPoint {
    fn from(cp: sweep::CriticalPoint) -> Self {
        Self {
            kind: cp.kind.name().to_string(),
            location: cp.location,
            value_at: cp.value_at,
            bracket: cp.bracket,
            iterations: cp.iterations,
            boundary: cp.boundary,
        }
    }
}

/// Thermal state at `temperature` K; 0 gives the ground-space mixture.
#[pyfunction]
fn thermal_state(params: PyRef<'_, PyEffectiveParams>, temperature: f64) -> PyResult<PyDensityMatrix> {
    let spec = device::ThermalSpec::new(temperature).map_err(to_py)?;
    device::thermal_state(&params.0, spec)
        .map(PyDensityMatrix)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (rho, side = "first"))]
fn quantum_discord(rho: PyRef<'_, PyDensityMatrix>, side: &str) -> PyResult<PyCorrelationReport> {
    let r = corr::quantum_discord(&rho.0, parse_side(side)?).map_err(to_py)?;
    Ok(PyCorrelationReport {
        mutual_information: r.mutual_information,
        classical_correlation: r.classical_correlation,
        discord: r.discord,
        concurrence: r.concurrence,
        eof: r.eof,
        theta_opt: r.optimal_measurement.theta,
        phi_opt: r.optimal_measurement.phi,
    })
}

#[pyfunction]
#[pyo3(signature = (rho, n_theta = 181, n_phi = 360, side = "first"))]
fn discord_grid_oracle(
    rho: PyRef<'_, PyDensityMatrix>,
    n_theta: usize,
    n_phi: usize,
    side: &str,
) -> PyResult<f64> {
    corr::discord_grid_oracle(&rho.0, parse_side(side)?, n_theta, n_phi).map_err(to_py)
}

#[pyfunction]
fn mutual_information(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    corr::mutual_information(&rho.0).map_err(to_py)
}

#[pyfunction]
fn von_neumann_entropy(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    corr::von_neumann_entropy(&rho.0).map_err(to_py)
}

#[pyfunction]
fn concurrence(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    corr::concurrence(&rho.0).map_err(to_py)
}

#[pyfunction]
fn eof(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    corr::eof(&rho.0).map_err(to_py)
}

/// Closed-form zero-temperature discord for `ε₁ = ε₂ = eps`, coupling `j`.
#[pyfunction]
fn ground_state_discord_analytic(eps: f64, j: f64) -> PyResult<f64> {
    corr::ground_state_discord_analytic(eps, j).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, t_max = 1.0, tol = sweep::DEFAULT_ESD_TOL))]
fn esd_temperature(
    params: PyRef<'_, PyEffectiveParams>,
    t_max: f64,
    tol: f64,
) -> PyResult<PyCriticalPoint> {
    sweep::esd_temperature(&params.0, t_max, tol)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (temperature, lo = 0.1, hi = 50.0))]
fn optimal_ratio(temperature: f64, lo: f64, hi: f64) -> PyResult<PyCriticalPoint> {
    sweep::optimal_ratio(temperature, (lo, hi))
        .map(Into::into)
        .map_err(to_py)
}

/// Runs a figure preset; returns `[(label, columns, rows)]` with rows as lists of floats.
#[pyfunction]
fn figure(py: Python<'_>, which: &str) -> PyResult<Vec<(String, Vec<String>, Vec<Vec<f64>>)>> {
    let fig: Figure = which.parse().map_err(to_py)?;
    let presets = sweep::figure_preset(fig);
    py.detach(|| {
        presets
            .into_iter()
            .map(|p| {
                let mut columns = vec![p.x.variable.name().to_string()];
                if let Some(y) = &p.y {
                    columns.push(y.variable.name().to_string());
                }
                columns.extend(p.x.measures.iter().map(|m| m.name().to_string()));
                let rows = p
                    .run()?
                    .into_iter()
                    .map(|r| r.axis.into_iter().chain(r.values).collect())
                    .collect();
                Ok((p.label, columns, rows))
            })
            .collect::<jqdiscord::Result<Vec<_>>>()
    })
    .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "jqdiscord")]
pub fn jqdiscord_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEffectiveParams>()?;
    m.add_class::<PyDeviceParams>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyCorrelationReport>()?;
    m.add_class::<PyCriticalPoint>()?;
    m.add_function(wrap_pyfunction!(thermal_state, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_discord, m)?)?;
    m.add_function(wrap_pyfunction!(discord_grid_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(eof, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_discord_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(esd_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    Ok(())
}
