//! Python bindings: the main types (Pauli operators, stabilizer codes,
//! Clifford circuits) and the rate/analysis entry points.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stegqec::classical::{
    build_class_lp, classical_key_rate, exact_key_bits, matched_block_size, three_bit_closed_forms,
    PayloadWeighting, SyndromeClassSpec,
};
use stegqec::clifford::{conjugate_circuit, synthesize_encoder, verify_encoder, CliffordCircuit};
use stegqec::code::{
    build_syndrome_table, builtin_code, distance, reduce_to_ea, search_css_613, validate_code,
    StabilizerCode,
};
use stegqec::lp::{solve_max, LinearProgram, LpStatus};
use stegqec::pauli::PauliOperator;
use stegqec::perfect::{eve_channel_check, mixture_rates, Payload, PerfectCodeProtocol};
use stegqec::quantum::{
    binary_entropy, diamond_norm_iid, protocol1_report, protocol2_noisy_rate, protocol2_report,
    ChannelKind, ChannelSpec,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kind_of(text: &str) -> PyResult<ChannelKind> {
    match text {
        "bsc" => Ok(ChannelKind::Bsc),
        "dep" | "depolarizing" => Ok(ChannelKind::Depolarizing),
        other => Err(err(format!("unknown channel kind {other:?}"))),
    }
}

/// Phase-tracked n-qubit Pauli operator.
#[pyclass(name = "Pauli", from_py_object)]
#[derive(Clone)]
struct PyPauli {
    inner: PauliOperator,
}

#[pymethods]
impl PyPauli {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPauli {
            inner: text.parse().map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn weight(&self) -> usize {
        self.inner.weight()
    }

    fn commutes_with(&self, other: &PyPauli) -> bool {
        self.inner.commutes_with(&other.inner)
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<PyPauli> {
        Ok(PyPauli {
            inner: self.inner.multiply(&other.inner).map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pauli('{}')", self.inner)
    }
}

/// A stabilizer, subsystem, or entanglement-assisted code.
#[pyclass(name = "Code")]
struct PyCode {
    inner: StabilizerCode,
}

#[pymethods]
impl PyCode {
    /// Construct a built-in code by name.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(PyCode {
            inner: builtin_code(name).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn ebits(&self) -> usize {
        self.inner.ebits()
    }

    fn generators(&self) -> Vec<String> {
        self.inner
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect()
    }

    fn validate(&self) -> bool {
        validate_code(&self.inner).ok()
    }

    fn syndrome(&self, error: &str) -> PyResult<String> {
        let e: PauliOperator = error.parse().map_err(err)?;
        Ok(self.inner.syndrome(&e).map_err(err)?.to_string())
    }

    fn syndrome_table_csv(&self, max_weight: usize) -> PyResult<String> {
        Ok(build_syndrome_table(&self.inner, max_weight)
            .map_err(err)?
            .to_csv())
    }

    fn distance(&self) -> PyResult<usize> {
        distance(&self.inner).map_err(err)
    }

    fn synthesize_encoder(&self) -> PyResult<PyCircuit> {
        Ok(PyCircuit {
            inner: synthesize_encoder(&self.inner).map_err(err)?,
        })
    }

    fn verify_encoder(&self, circuit: &PyCircuit) -> PyResult<bool> {
        Ok(verify_encoder(&self.inner, &circuit.inner)
            .map_err(err)?
            .ok())
    }

    fn reduce_to_ea(&self, bob_qubit: usize) -> PyResult<PyCode> {
        Ok(PyCode {
            inner: reduce_to_ea(&self.inner, bob_qubit).map_err(err)?,
        })
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(name='{}', n={}, k={})",
            self.inner.name(),
            self.inner.n(),
            self.inner.k()
        )
    }
}

/// An ordered Clifford gate list.
#[pyclass(name = "Circuit")]
struct PyCircuit {
    inner: CliffordCircuit,
}

#[pymethods]
impl PyCircuit {
    #[new]
    fn new(width: usize, text: &str) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: CliffordCircuit::parse(width, text).map_err(err)?,
        })
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn emit(&self) -> String {
        self.inner.emit()
    }

    fn conjugate(&self, pauli: &PyPauli) -> PyResult<PyPauli> {
        Ok(PyPauli {
            inner: conjugate_circuit(&self.inner, &pauli.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(width={}, gates={})",
            self.inner.width(),
            self.inner.len()
        )
    }
}

/// Maximize c.x subject to A x = b, x >= 0. Returns (status, x, value).
#[pyfunction]
fn lp_solve_max(c: Vec<f64>, a: Vec<Vec<f64>>, b: Vec<f64>) -> PyResult<(String, Vec<f64>, f64)> {
    let names = (0..c.len()).map(|i| format!("x{i}")).collect();
    let lp = LinearProgram::new(c, a, b, names).map_err(err)?;
    let sol = solve_max(&lp).map_err(err)?;
    let status = match sol.status {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
    };
    Ok((status.into(), sol.x, sol.objective_value))
}

/// The noiseless three-bit closed forms at rate p.
#[pyfunction]
fn three_bit_forms(p: f64) -> PyResult<HashMap<String, f64>> {
    let f = three_bit_closed_forms(p).map_err(err)?;
    Ok(HashMap::from([
        ("q00_spread".into(), f.q00_spread),
        ("navg_spread".into(), f.navg_spread),
        ("q00_packed".into(), f.q00_packed),
        ("navg_packed".into(), f.navg_packed),
    ]))
}

/// Optimal hidden bits of the syndrome-class program ("three_bit" or
/// "five_bit") at rate p, with the syndrome-entropy reference.
#[pyfunction]
fn class_lp_optimum(code: &str, p: f64) -> PyResult<(f64, f64)> {
    let spec = match code {
        "three_bit" => SyndromeClassSpec::three_bit(p).map_err(err)?,
        "five_bit" => SyndromeClassSpec::five_bit(p).map_err(err)?,
        other => return Err(err(format!("unknown class spec {other:?}"))),
    };
    let lp = build_class_lp(&spec, &PayloadWeighting::FloorLog2).map_err(err)?;
    let sol = solve_max(&lp).map_err(err)?;
    Ok((sol.objective_value, spec.entropy()))
}

/// Classical key-consumption rate: (closed form, exact per-block at N).
#[pyfunction]
fn key_rates(p: f64, dp: f64, n: u64) -> PyResult<(f64, f64)> {
    let closed = classical_key_rate(p, dp).map_err(err)?;
    let m = matched_block_size(n, p, dp);
    let exact = exact_key_bits(n, m).map_err(err)? / n as f64;
    Ok((closed, exact))
}

/// Diamond norm of N iid channel uses at rates p and p + dp.
#[pyfunction]
fn diamond_norm(kind: &str, p: f64, dp: f64, n: usize) -> PyResult<(f64, f64)> {
    let spec = ChannelSpec::new(kind_of(kind)?, p, dp, n).map_err(err)?;
    let d = diamond_norm_iid(&spec);
    Ok((d.norm, d.p_opt))
}

#[pyfunction]
fn entropy(p: f64) -> f64 {
    binary_entropy(p)
}

/// Protocol-1 (qubit swapping) report on the depolarizing channel.
#[pyfunction]
fn protocol1(p: f64, dp: f64, n: usize, delta: f64) -> PyResult<HashMap<String, f64>> {
    let spec = ChannelSpec::new(ChannelKind::Depolarizing, p, dp, n).map_err(err)?;
    let r = protocol1_report(&spec, delta).map_err(err)?;
    Ok(HashMap::from([
        ("stego_rate".into(), r.stego_rate),
        ("m".into(), r.m as f64),
        ("key_rate_exact".into(), r.key_rate_exact),
        ("key_rate_closed".into(), r.key_rate_closed),
        ("kcr_exact".into(), r.kcr_exact),
        ("kcr_closed".into(), r.kcr_closed),
        ("tail_condition_ratio".into(), r.tail_condition_ratio),
    ]))
}

/// Protocol-2 (syndrome encoding) report.
#[pyfunction]
fn protocol2(kind: &str, p: f64, dp: f64, n: usize, delta: f64) -> PyResult<HashMap<String, f64>> {
    let spec = ChannelSpec::new(kind_of(kind)?, p, dp, n).map_err(err)?;
    let r = protocol2_report(&spec, delta).map_err(err)?;
    Ok(HashMap::from([
        ("stego_bits".into(), r.stego_bits),
        ("rate".into(), r.rate),
        ("log2_c".into(), r.log2_c),
        ("key_rate".into(), r.key_rate),
        ("security_bound".into(), r.security_bound),
    ]))
}

/// Noisy-channel protocol-2 rate with the protocol-1 comparator.
#[pyfunction]
fn noisy_rate(p: f64, dp: f64) -> PyResult<HashMap<String, f64>> {
    let r = protocol2_noisy_rate(p, dp).map_err(err)?;
    Ok(HashMap::from([
        ("rate".into(), r.rate),
        ("q_opt".into(), r.q_opt),
        ("protocol1_rate".into(), r.comparison_to_protocol1),
    ]))
}

/// Perfect-code mixture rates at depolarizing rate p.
#[pyfunction]
fn perfect_mixture(p: f64) -> PyResult<HashMap<String, f64>> {
    let r = mixture_rates(p).map_err(err)?;
    Ok(HashMap::from([
        ("q0".into(), r.mixture.q0),
        ("q1".into(), r.mixture.q1),
        ("q2".into(), r.mixture.q2),
        ("residual".into(), r.mixture.residual),
        ("n_avg".into(), r.n_avg),
        ("key_rate_block".into(), r.key_rate_block),
        ("key_rate_naive".into(), r.key_rate_naive),
    ]))
}

/// One seeded protocol block on the perfect code; returns a transcript.
#[pyfunction]
fn perfect_simulate(p: f64, payload: &str, seed: u64) -> PyResult<HashMap<String, String>> {
    let protocol = PerfectCodeProtocol::new().map_err(err)?;
    let t = protocol
        .simulate_roundtrip(p, Payload::parse(payload).map_err(err)?, seed)
        .map_err(err)?;
    Ok(HashMap::from([
        ("encoding_id".into(), t.encoding_id),
        ("key_bits_used".into(), t.key_bits_used.to_string()),
        (
            "syndrome_sent".into(),
            t.syndrome_sent
                .map_or("none".into(), |s| format!("{s:04b}")),
        ),
        ("wire_error".into(), t.wire_error.unwrap_or_default()),
        ("recovery_fidelity".into(), t.recovery_fidelity.to_string()),
    ]))
}

/// Seeded channel-emulation statistics for the perfect-code protocol.
#[pyfunction]
fn perfect_eve_check(p: f64, trials: u64, seed: u64) -> PyResult<HashMap<String, f64>> {
    let protocol = PerfectCodeProtocol::new().map_err(err)?;
    let r = eve_channel_check(&protocol, p, trials, seed).map_err(err)?;
    Ok(HashMap::from([
        ("trivial".into(), r.class_counts[0] as f64),
        ("single".into(), r.class_counts[1] as f64),
        ("double".into(), r.class_counts[2] as f64),
        ("n_avg_estimate".into(), r.n_avg_estimate),
        ("n_avg_exact".into(), r.n_avg_exact),
        ("chi_square".into(), r.chi_square),
        ("p_value".into(), r.p_value),
    ]))
}

/// Exhaustive six-qubit CSS search: (codes found, candidates examined).
#[pyfunction]
fn css613_search() -> (usize, usize) {
    let outcome = search_css_613();
    (outcome.codes_found(), outcome.total_examined())
}

#[pymodule]
fn stegqec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(lp_solve_max, m)?)?;
    m.add_function(wrap_pyfunction!(three_bit_forms, m)?)?;
    m.add_function(wrap_pyfunction!(class_lp_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(key_rates, m)?)?;
    m.add_function(wrap_pyfunction!(diamond_norm, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(protocol1, m)?)?;
    m.add_function(wrap_pyfunction!(protocol2, m)?)?;
    m.add_function(wrap_pyfunction!(noisy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_mixture, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_simulate, m)?)?;
    m.add_function(wrap_pyfunction!(perfect_eve_check, m)?)?;
    m.add_function(wrap_pyfunction!(css613_search, m)?)?;
    Ok(())
}
