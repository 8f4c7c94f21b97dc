//! Python bindings for the `xyz-ring` library.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use xyz_ring::ed::{dense_spectrum, ground_membership_in, DEFAULT_DEGENERACY_TOL};
use xyz_ring::entanglement::{self, pair_density, wootters_concurrence};
use xyz_ring::linalg::C64;
use xyz_ring::model::{couplings_from_params, mps_matrices};
use xyz_ring::mps::{build_state, explicit_ground_state};
use xyz_ring::observables;
use xyz_ring::parent::{assemble_chain_h, HamiltonianForm};
use xyz_ring::sweep::{self, Command, ConfigFile, SweepConfig};
use xyz_ring::verify::cmd_verify;
use xyz_ring::Sign;

fn py_err(e: xyz_ring::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sign(v: i64) -> PyResult<Sign> {
    Sign::from_value(v).map_err(py_err)
}

#[pyclass(name = "ModelParams", frozen, from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    inner: xyz_ring::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (epsilon = 1, eta = 1, g = 0.0, j = 1.0, n = 4))]
    fn new(epsilon: i64, eta: i64, g: f64, j: f64, n: usize) -> PyResult<Self> {
        let inner = xyz_ring::ModelParams::new(sign(epsilon)?, sign(eta)?, g, j, n).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon.value()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta.value()
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn j(&self) -> f64 {
        self.inner.j
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// `{"jx", "jy", "jz", "b"}` of the ring Hamiltonian.
    fn couplings<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let k = couplings_from_params(&self.inner);
        let d = PyDict::new(py);
        d.set_item("jx", k.jx)?;
        d.set_item("jy", k.jy)?;
        d.set_item("jz", k.jz)?;
        d.set_item("b", k.b)?;
        Ok(d)
    }

    fn ground_energy(&self) -> f64 {
        self.inner.ground_energy()
    }

    /// `(A0, A1)` as nested lists of complex numbers.
    fn mps_matrices(&self) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let t = mps_matrices(&self.inner);
        let rows = |m: &xyz_ring::linalg::Mat2| (0..2).map(|r| (0..2).map(|c| m[(r, c)]).collect()).collect();
        (rows(&t.a0), rows(&t.a1))
    }

    /// Normalized trace-state amplitudes; site 1 is the most significant bit.
    fn build_state(&self) -> PyResult<Vec<C64>> {
        let s = build_state(&mps_matrices(&self.inner), self.inner.n).map_err(py_err)?;
        Ok(s.state.amplitudes.iter().copied().collect())
    }

    fn explicit_ground_state(&self) -> PyResult<Vec<C64>> {
        Ok(explicit_ground_state(&self.inner).map_err(py_err)?.amplitudes.iter().copied().collect())
    }

    /// Wootters concurrence of sites `i`, `j` from the closed-form pair density.
    fn concurrence(&self, i: usize, j: usize) -> PyResult<f64> {
        let rho = pair_density(&self.inner, i, j).map_err(py_err)?;
        Ok(wootters_concurrence(&rho).map_err(py_err)?.c)
    }

    /// Dense ED: `(ground_energy, ground_space_dim, residual, overlap)` for the
    /// explicit state against the coupling-form Hamiltonian.
    fn ed_compare(&self) -> PyResult<(f64, usize, f64, f64)> {
        let h = assemble_chain_h(&self.inner, HamiltonianForm::Couplings).map_err(py_err)?;
        let spectrum = dense_spectrum(&h, DEFAULT_DEGENERACY_TOL).map_err(py_err)?;
        let psi = explicit_ground_state(&self.inner).map_err(py_err)?;
        let m = ground_membership_in(&h, &spectrum, &psi).map_err(py_err)?;
        Ok((spectrum.ground_energy(), spectrum.ground_space_dim, m.residual, m.overlap))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("ModelParams(epsilon={}, eta={}, g={}, j={}, n={})", p.epsilon, p.eta, p.g, p.j, p.n)
    }
}

#[pyfunction]
fn u_param(g: f64) -> PyResult<f64> {
    observables::u_param(g).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (g, n, epsilon = 1))]
fn magnetization_x(g: f64, n: usize, epsilon: i64) -> PyResult<f64> {
    observables::magnetization_x(sign(epsilon)?, g, n).map_err(py_err)
}

/// `(Gx, Gy, Gz)` of sites 1 and `r`.
#[pyfunction]
#[pyo3(signature = (g, n, eta = 1, r = 2))]
fn correlations(g: f64, n: usize, eta: i64, r: usize) -> PyResult<(f64, f64, f64)> {
    let k = observables::correlations_at(sign(eta)?, g, n, r).map_err(py_err)?;
    Ok((k.gx, k.gy, k.gz))
}

#[pyfunction]
#[pyo3(signature = (g, epsilon = 1))]
fn thermodynamic_magnetization(g: f64, epsilon: i64) -> PyResult<f64> {
    observables::thermodynamic_magnetization(sign(epsilon)?, g).map_err(py_err)
}

#[pyfunction]
fn thermodynamic_correlations(g: f64) -> PyResult<(f64, f64, f64)> {
    let k = observables::thermodynamic_correlations(g).map_err(py_err)?;
    Ok((k.gx, k.gy, k.gz))
}

#[pyfunction]
fn concurrence_closed(g: f64, n: usize) -> PyResult<f64> {
    entanglement::concurrence_closed(g, n).map_err(py_err)
}

#[pyfunction]
fn scaling_limit(g: f64) -> f64 {
    entanglement::scaling_limit(g)
}

#[pyfunction]
fn scaled_concurrence_curve(n: usize, g_grid: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    entanglement::scaled_concurrence_curve(n, &g_grid).map_err(py_err)
}

/// Runs a CLI command (`verify`, `sweep`, `figure1`, `figure2`, `ed-compare`)
/// with an optional JSON config. Returns `(ok, text)`; `verify` text is
/// JSON lines.
#[pyfunction]
#[pyo3(signature = (command, config_json = None))]
fn run_command(command: &str, config_json: Option<&str>) -> PyResult<(bool, String)> {
    let cmd = match command {
        "verify" => Command::Verify,
        "sweep" => Command::Sweep,
        "figure1" => Command::Figure1,
        "figure2" => Command::Figure2,
        "ed-compare" => Command::EdCompare,
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    };
    let mut cfg = SweepConfig::defaults_for(cmd);
    if let Some(text) = config_json {
        ConfigFile::parse(text).and_then(|f| f.apply(&mut cfg)).map_err(py_err)?;
    }
    cfg.output = None;
    cfg.validate(cmd).map_err(py_err)?;
    let out = match cmd {
        Command::Verify => {
            let r = cmd_verify(&cfg).map_err(py_err)?;
            return Ok((r.passed(), r.jsonl()));
        }
        Command::Sweep => sweep::cmd_sweep(&cfg),
        Command::Figure1 => sweep::cmd_figure1(&cfg),
        Command::Figure2 => sweep::cmd_figure2(&cfg),
        Command::EdCompare => sweep::cmd_ed_compare(&cfg),
    }
    .map_err(py_err)?;
    Ok((out.ok(), out.text))
}

#[pymodule]
#[pyo3(name = "xyz_ring")]
fn xyz_ring_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(u_param, m)?)?;
    m.add_function(wrap_pyfunction!(magnetization_x, m)?)?;
    m.add_function(wrap_pyfunction!(correlations, m)?)?;
    m.add_function(wrap_pyfunction!(thermodynamic_magnetization, m)?)?;
    m.add_function(wrap_pyfunction!(thermodynamic_correlations, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_closed, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_limit, m)?)?;
    m.add_function(wrap_pyfunction!(scaled_concurrence_curve, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}
