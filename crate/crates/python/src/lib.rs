//! Python bindings for `cyclocorr`.

use std::collections::BTreeMap;

use cyclocorr::diffset::Family;
use cyclocorr::spectra::HallPredictor;
use cyclocorr::{self as core, FamilyDescriptor};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn modulus(m: u64) -> PyResult<core::Modulus> {
    core::Modulus::new(m).map_err(err)
}

fn family(name: &str) -> PyResult<Family> {
    name.parse().map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).expect("json values serialize");
    py.import("json")?.call_method1("loads", (text,))
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    core::is_prime(n)
}

#[pyfunction]
fn mod_pow(base: u64, exp: u64, m: u64) -> PyResult<u64> {
    Ok(core::mod_pow(base, exp, modulus(m)?))
}

#[pyfunction]
fn mod_inverse(a: u64, m: u64) -> PyResult<u64> {
    core::mod_inverse(a, modulus(m)?).map_err(err)
}

#[pyfunction]
fn primitive_root(q: u64) -> PyResult<u64> {
    core::primitive_root(q).map_err(err)
}

#[pyfunction]
fn euler_phi(n: u64) -> u64 {
    core::euler_phi(n)
}

#[pyfunction]
fn hall_primes(limit: u64) -> Vec<u64> {
    core::hall_primes(limit)
}

/// Closed-form `(i, j)` of order 2, or of order 6 given the Hall `x`.
#[pyfunction]
#[pyo3(signature = (q, d, i, j, x=None))]
fn cyclotomic_number_closed_form(
    q: u64,
    d: u64,
    i: usize,
    j: usize,
    x: Option<i64>,
) -> PyResult<u64> {
    let x = x
        .map(|x| core::HallParameter::new(q, x))
        .transpose()
        .map_err(err)?;
    core::cyclotomic_number_closed_form(q, d, i, j, x).map_err(err)
}

#[pyclass(name = "CyclotomicSystem", frozen)]
struct PyCyclotomicSystem(core::CyclotomicSystem);

#[pymethods]
impl PyCyclotomicSystem {
    #[new]
    #[pyo3(signature = (q, d, alpha=None))]
    fn new(q: u64, d: u64, alpha: Option<u64>) -> PyResult<Self> {
        core::CyclotomicSystem::new(q, d, alpha)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    #[getter]
    fn alpha(&self) -> u64 {
        self.0.alpha()
    }

    fn class_of(&self, z: u64) -> PyResult<usize> {
        self.0.class_of(z).map_err(err)
    }

    fn classes(&self) -> Vec<Vec<u64>> {
        self.0.classes()
    }

    fn cyclotomic_number(&self, i: usize, j: usize) -> PyResult<u64> {
        self.0.cyclotomic_number(i, j).map_err(err)
    }

    fn cyclotomic_matrix(&self) -> Vec<Vec<u64>> {
        self.0.cyclotomic_matrix()
    }

    /// The Hall parameter `x`, after checking every order-6 cyclotomic number.
    fn derive_hall_x(&self) -> PyResult<i64> {
        self.0.derive_hall_x().map(|x| x.x()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "CyclotomicSystem(q={}, d={}, alpha={})",
            self.0.q(),
            self.0.order(),
            self.0.alpha()
        )
    }
}

#[pyclass(name = "SupportSet", frozen, eq)]
#[derive(PartialEq)]
struct PySupportSet(core::SupportSet);

#[pymethods]
impl PySupportSet {
    #[new]
    fn new(modulus: usize, members: Vec<usize>) -> PyResult<Self> {
        core::SupportSet::new(modulus, members)
            .map(Self)
            .map_err(err)
    }

    /// Parses `"N=15: 0,1,2,4,5,8,10"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn modulus(&self) -> usize {
        self.0.modulus()
    }

    #[getter]
    fn members(&self) -> Vec<usize> {
        self.0.members().to_vec()
    }

    fn scale(&self, r: usize) -> Self {
        Self(self.0.scale(r))
    }

    fn translate(&self, g: usize) -> Self {
        Self(self.0.translate(g))
    }

    fn sequence(&self) -> PyBinarySequence {
        PyBinarySequence(self.0.characteristic_sequence())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, z: usize) -> bool {
        self.0.contains(z)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SupportSet({:?})", self.0.to_string())
    }
}

#[pyclass(name = "BinarySequence", frozen, eq)]
#[derive(PartialEq)]
struct PyBinarySequence(core::BinarySequence);

#[pymethods]
impl PyBinarySequence {
    /// From a 0/1 string.
    #[new]
    fn new(bits: &str) -> PyResult<Self> {
        bits.parse().map(Self).map_err(err)
    }

    #[getter]
    fn period(&self) -> usize {
        self.0.period()
    }

    #[getter]
    fn bits(&self) -> Vec<u8> {
        self.0.bits().iter().map(|&b| u8::from(b)).collect()
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn support(&self) -> PySupportSet {
        PySupportSet(self.0.support())
    }

    fn shift(&self, k: i64) -> Self {
        Self(self.0.shift(k))
    }

    fn decimate(&self, r: usize) -> PyResult<Self> {
        self.0.decimate(r).map(Self).map_err(err)
    }

    fn least_rotation(&self) -> usize {
        self.0.least_rotation()
    }

    fn canonical_rotation(&self) -> Self {
        Self(self.0.canonical_rotation())
    }

    fn minimal_period(&self) -> usize {
        self.0.minimal_period()
    }

    /// Shift `y` with `self == other.shift(y)`, or `None`.
    fn phase_equivalent(&self, other: &PyBinarySequence) -> PyResult<Option<usize>> {
        self.0.phase_equivalent(&other.0).map_err(err)
    }

    fn cross_correlation(&self, other: &PyBinarySequence, w: i64) -> PyResult<i64> {
        self.0.cross_correlation(&other.0, w).map_err(err)
    }

    fn autocorrelation(&self, w: i64) -> i64 {
        self.0.autocorrelation(w)
    }

    /// Per-shift values and `{value: count}` against `other` (or `self`).
    #[pyo3(signature = (other=None))]
    fn correlation_spectrum(
        &self,
        other: Option<&PyBinarySequence>,
    ) -> PyResult<(Vec<i64>, BTreeMap<i64, usize>)> {
        let spectrum = self
            .0
            .correlation_spectrum(other.map_or(&self.0, |o| &o.0))
            .map_err(err)?;
        Ok((spectrum.values().to_vec(), spectrum.histogram().clone()))
    }

    fn is_perfect(&self) -> bool {
        self.0.is_perfect()
    }

    fn __len__(&self) -> usize {
        self.0.period()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BinarySequence({:?})", self.0.to_string())
    }
}

#[pyfunction]
fn paley_set(q: u64) -> PyResult<PySupportSet> {
    core::paley_set(q).map(PySupportSet).map_err(err)
}

#[pyfunction]
fn twin_prime_set(q: u64) -> PyResult<PySupportSet> {
    core::twin_prime_set(q).map(PySupportSet).map_err(err)
}

/// `(D, x)` for a Hall prime.
#[pyfunction]
#[pyo3(signature = (q, alpha=None))]
fn hall_set(q: u64, alpha: Option<u64>) -> PyResult<(PySupportSet, i64)> {
    let (d, x) = core::hall_set(q, alpha).map_err(err)?;
    Ok((PySupportSet(d), x.x()))
}

/// Conjugate `index` of a family member as a sequence.
#[pyfunction]
#[pyo3(signature = (family_name, q, index=0, alpha=None))]
fn generate(
    family_name: &str,
    q: u64,
    index: usize,
    alpha: Option<u64>,
) -> PyResult<PyBinarySequence> {
    let desc = FamilyDescriptor::new(family(family_name)?, q, alpha).map_err(err)?;
    let conjugates = desc.conjugates();
    let d = conjugates.get(index).ok_or_else(|| {
        PyValueError::new_err(format!(
            "index {index} out of range (0..{})",
            conjugates.len()
        ))
    })?;
    Ok(PyBinarySequence(d.characteristic_sequence()))
}

/// `(v, k, lambda)`, or `None` when `d` is not a difference set.
#[pyfunction]
fn verify_difference_set(d: &PySupportSet) -> Option<(usize, usize, usize)> {
    core::verify_difference_set(&d.0).map(|p| (p.v, p.k, p.lambda))
}

#[pyfunction]
fn multiplier_group(d: &PySupportSet) -> Vec<usize> {
    core::multiplier_group(&d.0).members().to_vec()
}

/// `[(r, r^-1 D), ...]` over coset representatives of the multiplier group.
#[pyfunction]
fn decimation_orbit(d: &PySupportSet) -> Vec<(usize, PySupportSet)> {
    core::decimation_orbit(&d.0)
        .into_iter()
        .map(|c| (c.representative, PySupportSet(c.support)))
        .collect()
}

#[pyfunction]
fn predict_paley(q: u64, w: i64) -> PyResult<i64> {
    core::predict_paley(q, w).map_err(err)
}

#[pyfunction]
fn predict_twin_prime(q: u64, w: i64) -> PyResult<i64> {
    core::predict_twin_prime(q, w).map_err(err)
}

/// `C_{s_i,s_j}(w)` for Hall conjugates.
#[pyfunction]
#[pyo3(signature = (q, i, j, w, alpha=None))]
fn predict_hall(q: u64, i: usize, j: usize, w: i64, alpha: Option<u64>) -> PyResult<i64> {
    HallPredictor::for_prime(q, alpha)
        .and_then(|p| p.predict(i, j, w))
        .map_err(err)
}

/// Full verification of one family member, as a dict.
#[pyfunction]
#[pyo3(signature = (family_name, q, alpha=None))]
fn verify_family<'py>(
    py: Python<'py>,
    family_name: &str,
    q: u64,
    alpha: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let desc = FamilyDescriptor::new(family(family_name)?, q, alpha).map_err(err)?;
    let report = py.detach(|| core::verify_family(&desc)).map_err(err)?;
    json_to_py(py, &report.to_json())
}

#[pymodule]
pub fn pycyclocorr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyclotomicSystem>()?;
    m.add_class::<PySupportSet>()?;
    m.add_class::<PyBinarySequence>()?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(mod_pow, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_root, m)?)?;
    m.add_function(wrap_pyfunction!(euler_phi, m)?)?;
    m.add_function(wrap_pyfunction!(hall_primes, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_number_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(paley_set, m)?)?;
    m.add_function(wrap_pyfunction!(twin_prime_set, m)?)?;
    m.add_function(wrap_pyfunction!(hall_set, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_difference_set, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier_group, m)?)?;
    m.add_function(wrap_pyfunction!(decimation_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(predict_paley, m)?)?;
    m.add_function(wrap_pyfunction!(predict_twin_prime, m)?)?;
    m.add_function(wrap_pyfunction!(predict_hall, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family, m)?)?;
    Ok(())
}
