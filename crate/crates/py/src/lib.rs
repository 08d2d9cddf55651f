//! Python bindings for the `qss_core` simulator.
//!
//! Structured results (transcripts, reports, statistics) come back as plain
//! dicts and lists.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use qss_core::attack::{self, AttackedSession as CoreAttackedSession, SplitUnitary};
use qss_core::cli;
use qss_core::detection::{self, Mode};
use qss_core::protocol::{self, HonestSession as CoreHonestSession, Parity};
use qss_core::seeds::SimRng;
use qss_core::statevec::{PureState as CorePureState, QubitLabel};
use qss_core::Error;
use rand::SeedableRng;

fn err(e: Error) -> PyErr {
    if e.is_invariant_breach() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn label(name: &str) -> PyResult<QubitLabel> {
    name.parse().map_err(PyValueError::new_err)
}

fn labels(names: &[String]) -> PyResult<Vec<QubitLabel>> {
    names.iter().map(|n| label(n)).collect()
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Normalized pure state over named qubits, big-endian in label order.
#[pyclass(name = "PureState", module = "qss", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PureState(CorePureState);

#[pymethods]
impl PureState {
    #[new]
    fn new(labels_: Vec<String>, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        CorePureState::from_amplitudes(&labels(&labels_)?, amplitudes)
            .map(PureState)
            .map_err(err)
    }

    #[staticmethod]
    fn basis_state(labels_: Vec<String>, bits: Vec<u8>) -> PyResult<Self> {
        CorePureState::basis_state(&labels(&labels_)?, &bits)
            .map(PureState)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(PureState)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn labels(&self) -> Vec<&'static str> {
        self.0.labels().iter().map(|l| l.as_str()).collect()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn tensor(&self, other: &PureState) -> PyResult<Self> {
        self.0.tensor(&other.0).map(PureState).map_err(err)
    }

    fn apply_hadamard(&self, target: &str) -> PyResult<Self> {
        self.0.apply_hadamard(label(target)?).map(PureState).map_err(err)
    }

    fn apply_x(&self, target: &str) -> PyResult<Self> {
        self.0.apply_x(label(target)?).map(PureState).map_err(err)
    }

    fn apply_cnot(&self, control: &str, target: &str) -> PyResult<Self> {
        self.0
            .apply_cnot(label(control)?, label(target)?)
            .map(PureState)
            .map_err(err)
    }

    /// Bob's three-qubit split permutation on (b, q1, q2)-ordered targets.
    fn apply_split(&self, targets: Vec<String>) -> PyResult<Self> {
        self.0
            .apply_unitary(&labels(&targets)?, SplitUnitary::new().matrix())
            .map(PureState)
            .map_err(err)
    }

    fn relabel(&self, from: &str, to: &str) -> PyResult<Self> {
        self.0.relabel(label(from)?, label(to)?).map(PureState).map_err(err)
    }

    fn reorder(&self, order: Vec<String>) -> PyResult<Self> {
        self.0.reorder(&labels(&order)?).map(PureState).map_err(err)
    }

    fn discard(&self, targets: Vec<String>) -> PyResult<Self> {
        self.0.discard_group(&labels(&targets)?).map(PureState).map_err(err)
    }

    fn probabilities(&self, targets: Vec<String>) -> PyResult<Vec<f64>> {
        self.0.outcome_probabilities(&labels(&targets)?).map_err(err)
    }

    /// Returns the outcome bits and the collapsed state.
    fn measure(&self, targets: Vec<String>, seed: u64) -> PyResult<(Vec<u8>, Self)> {
        let mut rng = SimRng::seed_from_u64(seed);
        let (bits, state) = self
            .0
            .measure_computational(&labels(&targets)?, &mut rng)
            .map_err(err)?;
        Ok((bits, PureState(state)))
    }

    /// Returns the Bell outcome name and the post-measurement state.
    fn measure_bell(&self, x: &str, y: &str, seed: u64) -> PyResult<(String, Self)> {
        let mut rng = SimRng::seed_from_u64(seed);
        let (outcome, state) = self
            .0
            .measure_bell((label(x)?, label(y)?), &mut rng)
            .map_err(err)?;
        Ok((format!("{outcome:?}"), PureState(state)))
    }

    #[pyo3(signature = (other, tol = 1e-10))]
    fn equal_up_to_global_phase(&self, other: &PureState, tol: f64) -> PyResult<bool> {
        self.0.equal_up_to_global_phase(&other.0, tol).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __repr__(&self) -> String {
        format!("PureState({})", self.0)
    }
}

#[pyfunction]
fn make_g() -> PureState {
    PureState(protocol::make_g())
}

#[pyfunction]
fn make_e() -> PureState {
    PureState(protocol::make_e())
}

/// Round-by-round honest protocol over a reused carrier.
#[pyclass(module = "qss")]
struct HonestSession(CoreHonestSession<SimRng>);

#[pymethods]
impl HonestSession {
    #[new]
    fn new(seed: u64) -> Self {
        HonestSession(CoreHonestSession::new(SimRng::seed_from_u64(seed)))
    }

    #[getter]
    fn carrier(&self) -> PureState {
        PureState(self.0.carrier().clone())
    }

    fn run_round<'py>(&mut self, py: Python<'py>, q: u8) -> PyResult<Bound<'py, PyAny>> {
        let record = self.0.run_round(q).map_err(err)?;
        to_py(py, &record)
    }
}

/// Round-by-round session with Bob running the split attack.
#[pyclass(module = "qss")]
struct AttackedSession(CoreAttackedSession);

#[pymethods]
impl AttackedSession {
    #[new]
    fn new(seed: u64) -> Self {
        AttackedSession(CoreAttackedSession::new(seed))
    }

    #[getter]
    fn carrier(&self) -> PureState {
        PureState(self.0.carrier().clone())
    }

    #[getter]
    fn records<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.0.records())
    }

    fn run_round<'py>(&mut self, py: Python<'py>, q: u8) -> PyResult<Bound<'py, PyAny>> {
        let record = self.0.run_round(q).map_err(err)?;
        to_py(py, &record)
    }
}

#[pyfunction]
fn run_honest_session<'py>(py: Python<'py>, bits: Vec<u8>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let transcript = protocol::run_honest_session(&bits, seed).map_err(err)?;
    to_py(py, &transcript)
}

#[pyfunction]
#[pyo3(signature = (bits, compared, seed))]
fn run_attacked_session<'py>(
    py: Python<'py>,
    bits: Vec<u8>,
    compared: Vec<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let compared = compared.into_iter().collect();
    let outcome = attack::run_attacked_session_with(&bits, &compared, seed).map_err(err)?;
    to_py(py, &outcome)
}

#[pyfunction]
#[pyo3(signature = (mode, n, trials, fraction = 0.25, seed = 42))]
fn run_trials<'py>(
    py: Python<'py>,
    mode: &str,
    n: usize,
    trials: usize,
    fraction: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mode: Mode = mode.parse().map_err(err)?;
    let batch = py
        .detach(|| detection::run_trials(mode, n, trials, fraction, seed))
        .map_err(err)?;
    to_py(py, &batch.stats)
}

#[pyfunction]
fn verify_round(parity: &str, alice: u8, bob: u8, charlie: u8) -> PyResult<bool> {
    let kind = match parity {
        "odd" => Parity::Odd,
        "even" => Parity::Even,
        other => return Err(PyValueError::new_err(format!("unknown parity {other:?}"))),
    };
    Ok(detection::verify_round(kind, alice, bob, charlie))
}

#[pyfunction]
fn verify_equations(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &cli::verify_equations())
}

#[pymodule]
fn qss(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PureState>()?;
    m.add_class::<HonestSession>()?;
    m.add_class::<AttackedSession>()?;
    m.add_function(wrap_pyfunction!(make_g, m)?)?;
    m.add_function(wrap_pyfunction!(make_e, m)?)?;
    m.add_function(wrap_pyfunction!(run_honest_session, m)?)?;
    m.add_function(wrap_pyfunction!(run_attacked_session, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(verify_round, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equations, m)?)?;
    Ok(())
}
