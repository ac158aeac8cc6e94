//! Python bindings: the main types and operations of the `esbf` crate as an
//! extension module.
//!
//! Weights are arbitrary-precision and convert to Python ints losslessly.
//! Closed-form evaluators return the certified rounded integer; they raise
//! `ValueError` when the requested parameters are out of range or the error
//! bound cannot be pushed below 1/2.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use esbf::classify;
use esbf::closed_form;
use esbf::combinatorics;
use esbf::weight;

fn value_error(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

/// The elementary symmetric Boolean function sigma_(n,d).
#[pyclass(name = "Esbf", frozen)]
struct PyEsbf {
    inner: weight::Esbf,
}

#[pymethods]
impl PyEsbf {
    #[new]
    fn new(n: u64, d: u64) -> PyResult<Self> {
        let inner = weight::Esbf::new(n, d).map_err(value_error)?;
        Ok(PyEsbf { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> u64 {
        self.inner.d()
    }

    /// Exact Hamming weight as a Python int.
    fn weight(&self) -> BigUint {
        self.inner.weight_report().weight().clone()
    }

    fn is_balanced(&self) -> bool {
        self.inner.is_balanced()
    }

    /// "Less", "Equal" or "Greater" relative to 2^(n-1).
    fn trichotomy(&self) -> &'static str {
        self.inner.weight_report().trichotomy().as_str()
    }

    /// The simplified value vector as a list of n+1 booleans.
    fn value_vector(&self) -> Vec<bool> {
        self.inner.value_vector().bits().to_vec()
    }

    /// The exponents of the binary decomposition of d.
    fn power_decomposition(&self) -> Vec<u32> {
        weight::power_decomposition(self.inner.d())
    }

    fn classify(&self) -> PyVerdict {
        PyVerdict {
            inner: classify::classify(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("Esbf(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

/// A balancedness verdict with its deciding rule and proof trace.
#[pyclass(name = "Verdict", frozen)]
struct PyVerdict {
    inner: classify::Verdict,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }

    #[getter]
    fn d(&self) -> u64 {
        self.inner.d
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn rule(&self) -> String {
        self.inner.rule.clone()
    }

    /// The checked conditions as (condition, outcome) pairs, in order.
    #[getter]
    fn trace(&self) -> Vec<(String, bool)> {
        self.inner
            .trace
            .iter()
            .map(|s| (s.condition.clone(), s.outcome))
            .collect()
    }

    fn is_open(&self) -> bool {
        self.inner.kind.is_open()
    }

    /// The stable JSON shape {n, d, kind, rule, trace: [{condition, outcome}]}.
    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("verdicts serialize")
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(n={}, d={}, kind={}, rule={})",
            self.inner.n, self.inner.d, self.inner.kind, self.inner.rule
        )
    }
}

/// Exact binomial coefficient C(n, k); zero when k > n.
#[pyfunction]
fn binomial(n: u64, k: u64) -> BigUint {
    combinatorics::binomial(n, k)
}

/// The 2-adic partial order: true iff every binary digit of m is at most
/// the matching digit of n.
#[pyfunction]
fn preceq(m: u64, n: u64) -> bool {
    combinatorics::preceq(m, n)
}

/// C(n, m) mod 2 by Lucas' theorem.
#[pyfunction]
fn lucas_parity(n: u64, m: u64) -> u8 {
    combinatorics::lucas_parity(n, m)
}

/// Bitwise join of the binary expansions.
#[pyfunction]
fn or_join(i: u64, j: u64) -> u64 {
    combinatorics::or_join(i, j)
}

/// Residue-class binomial sum over 0 <= j <= n with j = residue (mod modulus).
#[pyfunction]
fn residue_class_sum(n: u64, modulus: u64, residue: u64) -> PyResult<BigUint> {
    combinatorics::residue_class_sum(n, modulus, residue).map_err(value_error)
}

/// All open conjecture pairs (n, d) with n <= n_max, sorted.
#[pyfunction]
fn open_cases(n_max: u64) -> Vec<(u64, u64)> {
    classify::open_cases(n_max)
        .into_iter()
        .map(|e| (e.n(), e.d()))
        .collect()
}

/// Residue-table trichotomy of wt(sigma_(n,2^t)): "Less", "Equal" or "Greater".
#[pyfunction]
fn trichotomy_weight_pow2(n: u64, t: u32) -> PyResult<&'static str> {
    if t < 1 || 1u64.checked_shl(t).is_none_or(|d| d > n) {
        return Err(value_error("need t >= 1 and 2^t <= n"));
    }
    Ok(closed_form::trichotomy_weight_pow2(n, t).as_str())
}

fn bits_or_default(n: u64, precision_bits: Option<u32>) -> u32 {
    precision_bits.unwrap_or_else(|| closed_form::default_precision_bits(n))
}

/// Certified rounded value of the closed form for A_n^(2^p)(i).
#[pyfunction]
#[pyo3(signature = (n, p, i, precision_bits=None))]
fn residue_class_sum_closed(
    n: u64,
    p: u32,
    i: u64,
    precision_bits: Option<u32>,
) -> PyResult<BigInt> {
    if !(1..=32).contains(&p) || i >= 1u64 << p {
        return Err(value_error("need p >= 1 and 0 <= i < 2^p"));
    }
    closed_form::residue_class_sum_closed(n, p, i, bits_or_default(n, precision_bits))
        .map(|eval| eval.rounded())
        .map_err(value_error)
}

/// Certified rounded value of the closed form for wt(sigma_(n,2^t)).
#[pyfunction]
#[pyo3(signature = (n, t, precision_bits=None))]
fn weight_pow2_closed(n: u64, t: u32, precision_bits: Option<u32>) -> PyResult<BigInt> {
    if t < 1 || 1u64.checked_shl(t).is_none_or(|d| d > n) {
        return Err(value_error("need t >= 1 and 2^t <= n"));
    }
    closed_form::weight_pow2_closed(n, t, bits_or_default(n, precision_bits))
        .map(|eval| eval.rounded())
        .map_err(value_error)
}

/// Certified rounded value of the closed form for wt(sigma_(n,2^t+1)).
#[pyfunction]
#[pyo3(signature = (n, t, precision_bits=None))]
fn weight_pow2_plus1_closed(n: u64, t: u32, precision_bits: Option<u32>) -> PyResult<BigInt> {
    if t < 1 || 1u64.checked_shl(t).is_none_or(|d| d + 1 > n) {
        return Err(value_error("need t >= 1 and 2^t + 1 <= n"));
    }
    closed_form::weight_pow2_plus1_closed(n, t, bits_or_default(n, precision_bits))
        .map(|eval| eval.rounded())
        .map_err(value_error)
}

/// Certified rounded value of the closed form for wt(sigma_(n,2^t+2^s)).
#[pyfunction]
#[pyo3(signature = (n, t, s, precision_bits=None))]
fn weight_two_powers_closed(
    n: u64,
    t: u32,
    s: u32,
    precision_bits: Option<u32>,
) -> PyResult<BigInt> {
    let valid = t >= 1 && t < s && s < 64 && 1u64 << s <= n && (1u64 << t) + (1u64 << s) <= n;
    if !valid {
        return Err(value_error("need 1 <= t < s <= log2(n) and 2^t + 2^s <= n"));
    }
    closed_form::weight_two_powers_closed(n, t, s, bits_or_default(n, precision_bits))
        .map(|eval| eval.rounded())
        .map_err(value_error)
}

#[pymodule]
fn esbf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEsbf>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(preceq, m)?)?;
    m.add_function(wrap_pyfunction!(lucas_parity, m)?)?;
    m.add_function(wrap_pyfunction!(or_join, m)?)?;
    m.add_function(wrap_pyfunction!(residue_class_sum, m)?)?;
    m.add_function(wrap_pyfunction!(open_cases, m)?)?;
    m.add_function(wrap_pyfunction!(trichotomy_weight_pow2, m)?)?;
    m.add_function(wrap_pyfunction!(residue_class_sum_closed, m)?)?;
    m.add_function(wrap_pyfunction!(weight_pow2_closed, m)?)?;
    m.add_function(wrap_pyfunction!(weight_pow2_plus1_closed, m)?)?;
    m.add_function(wrap_pyfunction!(weight_two_powers_closed, m)?)?;
    Ok(())
}
