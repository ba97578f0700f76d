//! Python bindings: `import shiftzeta`.

use std::fmt::{Debug, Display};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyTuple;

use shiftzeta::bridge::{self, DEFAULT_M_MAX};
use shiftzeta::decomp;
use shiftzeta::ff::{self, FieldHandle, FqContext};
use shiftzeta::sft::{self, DEFAULT_CAP};
use shiftzeta::spectral::{self, LimitDegreeResult, DEFAULT_MAX_ITER};
use shiftzeta::zeta::{self, IntPoly, PowerSeries, RationalFunction};

create_exception!(shiftzeta, ShiftZetaError, PyValueError);

const WRAPPERS: [&str; 4] = ["Field", "Sft", "Spectral", "Zeta"];

/// "Variant: message", with wrapper variants peeled off the name.
fn error<E: Debug + Display>(e: E) -> PyErr {
    let debug = format!("{e:?}");
    let mut name = debug.as_str();
    loop {
        let end = name.find(|c: char| !c.is_alphanumeric()).unwrap_or(name.len());
        if WRAPPERS.contains(&&name[..end]) && name[end..].starts_with('(') {
            name = &name[end + 1..];
        } else if let Some(at) = name.find("source: ").filter(|_| name[end..].starts_with(" {")) {
            name = &name[at + "source: ".len()..];
        } else {
            name = &name[..end];
            break;
        }
    }
    ShiftZetaError::new_err(format!("{name}: {e}"))
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer().clone(), r.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, s: &PowerSeries) -> PyResult<Vec<Bound<'py, PyAny>>> {
    s.coeffs().iter().map(|c| fraction(py, c)).collect()
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    let f = value.py().import("fractions")?.getattr("Fraction")?.call1((value,))?;
    let numer: BigInt = f.getattr("numerator")?.extract()?;
    let denom: BigInt = f.getattr("denominator")?.extract()?;
    Ok(BigRational::new(numer, denom))
}

fn coefficients(p: &IntPoly) -> Vec<BigInt> {
    p.coeffs().to_vec()
}

fn rational_function(f: &RationalFunction) -> (Vec<BigInt>, Vec<BigInt>) {
    (coefficients(f.numerator()), coefficients(f.denominator()))
}

/// The finite field `F_{p^e}`.
#[pyclass(frozen, module = "shiftzeta")]
struct Field {
    ctx: Arc<FqContext>,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, e = 1, modulus = None))]
    fn new(p: u64, e: usize, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        let ctx = match modulus {
            Some(m) => {
                if m.len() != e + 1 {
                    return Err(PyValueError::new_err(format!("modulus has degree {}, expected {e}", m.len().saturating_sub(1))));
                }
                ff::field_with_modulus(p, &m, ff::DEFAULT_SCAN_LIMIT)
            }
            None => ff::build_field(p, e),
        }
        .map_err(error)?;
        Ok(Field { ctx })
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.ctx.characteristic()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.ctx.degree()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.ctx.order()
    }

    /// Coefficients of the modulus, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.ctx.modulus().to_vec()
    }

    /// Element with the given index in the canonical order.
    fn element(&self, code: u64) -> PyResult<Element> {
        if code >= self.ctx.order() {
            return Err(PyValueError::new_err(format!("code {code} is out of range for a field of order {}", self.ctx.order())));
        }
        Ok(Element { inner: self.ctx.element_from_code(code) })
    }

    /// Element `c_0 + c_1 t + ...`.
    fn from_coeffs(&self, coeffs: Vec<i64>) -> Element {
        Element { inner: self.ctx.element(&coeffs) }
    }

    fn generator(&self) -> Element {
        Element { inner: self.ctx.generator() }
    }

    fn elements(&self) -> Vec<Element> {
        self.ctx.elements().map(|inner| Element { inner }).collect()
    }

    fn __len__(&self) -> usize {
        self.ctx.order() as usize
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.ctx == other.ctx
    }

    fn __repr__(&self) -> String {
        format!("Field({}, {}, modulus={:?})", self.ctx.characteristic(), self.ctx.degree(), self.ctx.modulus())
    }
}

#[pyclass(frozen, eq, ord, hash, skip_from_py_object, module = "shiftzeta")]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Element {
    inner: ff::FieldElement,
}

#[pymethods]
impl Element {
    #[getter]
    fn code(&self) -> u64 {
        self.inner.code()
    }

    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.inner.coeffs()
    }

    fn field(&self) -> Field {
        Field { ctx: Arc::clone(self.inner.context()) }
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_add(&other.inner).map(|inner| Element { inner }).map_err(error)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_sub(&other.inner).map(|inner| Element { inner }).map_err(error)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_mul(&other.inner).map(|inner| Element { inner }).map_err(error)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        let inv = other.inner.inverse().map_err(|e| PyZeroDivisionError::new_err(e.to_string()))?;
        self.inner.checked_mul(&inv).map(|inner| Element { inner }).map_err(error)
    }

    fn __neg__(&self) -> Self {
        Element { inner: self.inner.context().zero() - self.inner.clone() }
    }

    fn __pow__(&self, exp: i64, modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("three-argument pow is not supported"));
        }
        let base = if exp < 0 { self.inner.inverse().map_err(|e| PyZeroDivisionError::new_err(e.to_string()))? } else { self.inner.clone() };
        Ok(Element { inner: base.pow(exp.unsigned_abs()) })
    }

    fn inverse(&self) -> PyResult<Self> {
        self.inner.inverse().map(|inner| Element { inner }).map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    /// `a^(p^k)`.
    #[pyo3(signature = (k = 1))]
    fn frobenius(&self, k: u64) -> Self {
        Element { inner: self.inner.frobenius(k) }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner)
    }
}

/// A vertex shift given by a 0/1 matrix.
#[pyclass(frozen, eq, skip_from_py_object, module = "shiftzeta")]
#[derive(Clone, PartialEq, Eq)]
struct Sft {
    inner: sft::Sft,
}

fn wrap(inner: sft::Sft) -> Sft {
    Sft { inner }
}

#[pymethods]
impl Sft {
    #[new]
    #[pyo3(signature = (matrix, states = None))]
    fn new(matrix: Vec<Vec<i64>>, states: Option<Vec<String>>) -> PyResult<Self> {
        match states {
            Some(s) => sft::Sft::from_matrix(s, matrix),
            None => sft::Sft::from_unlabelled(matrix),
        }
        .map(wrap)
        .map_err(error)
    }

    #[staticmethod]
    fn from_edges(states: Vec<String>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        sft::Sft::from_edges(states, &edges).map(wrap).map_err(error)
    }

    /// Parses the `.sft` text format; returns the shift and the optional permutation.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<(Self, Option<Vec<usize>>)> {
        let file = shiftzeta::cli::parse_sft_file(text).map_err(error)?;
        Ok((wrap(file.sft), file.perm))
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states().to_vec()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<u32>> {
        self.inner.matrix().iter().map(|row| row.iter().map(|&a| u32::from(a)).collect()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_essential(&self) -> bool {
        self.inner.is_essential()
    }

    fn prune(&self) -> Self {
        wrap(sft::prune(&self.inner))
    }

    fn word_count(&self, length: usize) -> PyResult<BigInt> {
        sft::word_count(&self.inner, length).map(BigInt::from).map_err(error)
    }

    fn periodic_count(&self, n: usize) -> PyResult<BigInt> {
        sft::periodic_count(&self.inner, n).map(BigInt::from).map_err(error)
    }

    #[pyo3(signature = (n, cap = DEFAULT_CAP))]
    fn periodic_words(&self, n: usize, cap: usize) -> PyResult<Vec<Vec<usize>>> {
        sft::enumerate_periodic(&self.inner, n, cap).map_err(error)
    }

    #[pyo3(signature = (l, cap = DEFAULT_CAP))]
    fn higher_block(&self, l: usize, cap: usize) -> PyResult<Self> {
        sft::higher_block(&self.inner, l, cap).map(|hb| wrap(hb.sft)).map_err(error)
    }

    /// `det(I - tA)` as integer coefficients, constant term first.
    fn char_poly_reversed(&self) -> PyResult<Vec<BigInt>> {
        zeta::char_poly_reversed(&self.inner).map(|p| coefficients(&p)).map_err(error)
    }

    /// The zeta function as `(numerator, denominator)` coefficient lists.
    fn zeta(&self) -> PyResult<(Vec<BigInt>, Vec<BigInt>)> {
        zeta::dynamical_zeta(&self.inner).map(|f| rational_function(&f)).map_err(error)
    }

    fn zeta_series<'py>(&self, py: Python<'py>, order: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &zeta::zeta_series(&self.inner, order))
    }

    /// Counts `N_1..N_n` of points fixed by `perm ∘ σ^n`, and the order of `perm`.
    fn twisted_counts(&self, perm: Vec<usize>, n: usize) -> PyResult<(Vec<BigInt>, usize)> {
        let tw = zeta::make_twist(&self.inner, &perm).map_err(error)?;
        Ok((zeta::twisted_counts(&tw, n).into_iter().map(BigInt::from).collect(), tw.order()))
    }

    /// Rigorous bracket `(lo, hi)` on the Perron eigenvalue.
    #[pyo3(signature = (tol = None, max_iter = DEFAULT_MAX_ITER))]
    fn entropy_bounds<'py>(&self, py: Python<'py>, tol: Option<&Bound<'py, PyAny>>, max_iter: usize) -> PyResult<Bound<'py, PyTuple>> {
        let tol = match tol {
            Some(t) => rational(t)?,
            None => BigRational::new(1.into(), 1_000_000.into()),
        };
        let b = spectral::entropy_bounds(&self.inner, &tol, max_iter).map_err(error)?;
        PyTuple::new(py, [fraction(py, &b.lambda_lo)?, fraction(py, &b.lambda_hi)?])
    }

    /// Stabilised growth ratio of word counts, or `None`.
    #[pyo3(signature = (l_max = 12, window = 3))]
    fn limit_degree(&self, l_max: usize, window: usize) -> PyResult<Option<u64>> {
        Ok(match spectral::limit_degree(&self.inner, l_max, window).map_err(error)? {
            LimitDegreeResult::Stabilized { degree, .. } => Some(degree),
            LimitDegreeResult::NotStabilized { .. } => None,
        })
    }

    /// Communicating classes, sinks first.
    fn communicating_classes(&self) -> Vec<Vec<usize>> {
        decomp::communicating_classes(&self.inner).classes
    }

    fn sigma_components(&self) -> Vec<Vec<usize>> {
        decomp::sigma_components(&self.inner).into_iter().map(|c| c.states).collect()
    }

    /// One `(states, modulus, labels)` triple per σ-component.
    fn strong_core(&self) -> Vec<(Vec<usize>, usize, Vec<usize>)> {
        decomp::strong_core(&self.inner).components.into_iter().map(|c| (c.states, c.modulus, c.labels)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Sft(states={:?}, matrix={:?})", self.inner.states(), self.inner.matrix())
    }
}

/// A difference system over a finite field: a vertex polynomial and edge constraints.
#[pyclass(frozen, module = "shiftzeta")]
struct DifferenceSystem {
    inner: bridge::DifferenceSystem,
}

#[pymethods]
impl DifferenceSystem {
    /// Builds a system from polynomial strings in `x` (and `y`).
    #[new]
    fn new(field: &Field, vertex: &str, constraints: Vec<String>) -> PyResult<Self> {
        let g = ff::Poly::parse(&field.ctx, vertex).map_err(error)?;
        let fs = constraints.iter().map(|c| ff::BiPoly::parse(&field.ctx, c)).collect::<Result<Vec<_>, _>>().map_err(error)?;
        bridge::DifferenceSystem::new(g, fs).map(|inner| DifferenceSystem { inner }).map_err(error)
    }

    /// Parses the `.dsys` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        bridge::parse_dsys(text).map(|inner| DifferenceSystem { inner }).map_err(error)
    }

    /// The system whose graph over the base field is `sft`.
    #[staticmethod]
    fn from_sft(sft: &Sft, field: &Field) -> PyResult<Self> {
        bridge::sft_to_system(&sft.inner, &field.ctx).map(|inner| DifferenceSystem { inner }).map_err(error)
    }

    fn to_dsys(&self) -> String {
        bridge::emit_dsys(&self.inner)
    }

    fn field(&self) -> Field {
        Field { ctx: Arc::clone(self.inner.context()) }
    }

    fn splitting_degree(&self) -> PyResult<usize> {
        self.inner.splitting_degree().map_err(error)
    }

    /// `(sft, frobenius_permutation, splitting_degree)`.
    #[pyo3(signature = (m_max = DEFAULT_M_MAX))]
    fn build_sft(&self, m_max: usize) -> PyResult<(Sft, Vec<usize>, usize)> {
        let built = bridge::build_sft(&self.inner, m_max).map_err(error)?;
        Ok((wrap(built.sft), built.twist.permutation().to_vec(), built.m))
    }

    /// Points fixed by `σ^n ∘ Frobenius`, counted directly in the field.
    fn point_count(&self, n: usize) -> PyResult<usize> {
        bridge::point_count_direct(&self.inner, n).map_err(error)
    }

    /// The same count from the trace of the twisted matrix.
    fn point_count_matrix(&self, n: usize) -> PyResult<usize> {
        bridge::point_count_matrix(&self.inner, n).map_err(error)
    }

    /// `(series, numerator, denominator)`: the zeta series to the given order and
    /// its logarithmic derivative in closed form.
    fn zeta<'py>(&self, py: Python<'py>, order: usize) -> PyResult<(Vec<Bound<'py, PyAny>>, Vec<BigInt>, Vec<BigInt>)> {
        let (series, log_derivative) = bridge::difference_zeta(&self.inner, order).map_err(error)?;
        let (num, den) = rational_function(&log_derivative);
        Ok((fractions(py, &series)?, num, den))
    }

    #[pyo3(signature = (tol = None, max_iter = DEFAULT_MAX_ITER))]
    fn entropy_bounds<'py>(&self, py: Python<'py>, tol: Option<&Bound<'py, PyAny>>, max_iter: usize) -> PyResult<Bound<'py, PyTuple>> {
        let tol = match tol {
            Some(t) => rational(t)?,
            None => BigRational::new(1.into(), 1_000_000.into()),
        };
        let b = bridge::system_entropy(&self.inner, &tol, max_iter).map_err(error)?;
        PyTuple::new(py, [fraction(py, &b.lambda_lo)?, fraction(py, &b.lambda_hi)?])
    }

    /// Number of connected components of the spectrum.
    fn spec_sigma_component_count(&self) -> PyResult<usize> {
        bridge::spec_sigma_component_count(&self.inner).map_err(error)
    }

    fn __repr__(&self) -> String {
        format!("DifferenceSystem({:?})", bridge::emit_dsys(&self.inner))
    }
}

#[pymodule(name = "shiftzeta")]
fn shiftzeta_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ShiftZetaError", m.py().get_type::<ShiftZetaError>())?;
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_class::<Sft>()?;
    m.add_class::<DifferenceSystem>()?;
    Ok(())
}
