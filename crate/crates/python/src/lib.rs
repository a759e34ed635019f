//! Python bindings (exact arithmetic).
//!
//! Numbers cross the boundary as `fractions.Fraction` on the way out and as
//! `int`, `str` (`"p/q"`) or `Fraction` on the way in.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use powerdiag::adjacency::compute_adjacency;
use powerdiag::detector::{self, Verdict};
use powerdiag::geometry::{self, Halfspace};
use powerdiag::io::{CertificateDocument, ComplexDocument, DomainDocument, VerdictDocument};
use powerdiag::lp::{self, LinearSystem, Status};
use powerdiag::scalar::{Rational, Scalar, Tolerance};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<pyo3::types::PyFloat>() {
        return Err(value_error("floats are not exact; pass int, str or Fraction"));
    }
    Rational::parse_scalar(&obj.str()?.to_cow()?).map_err(value_error)
}

fn to_vec(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    obj.try_iter()?.map(|x| to_rational(&x?)).collect()
}

fn fraction<'py>(py: Python<'py>, v: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((v.to_string(),))
}

fn fractions<'py>(py: Python<'py>, vs: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = vs.iter().map(|v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn halfspace(normal: &Bound<'_, PyAny>, offset: &Bound<'_, PyAny>) -> PyResult<Halfspace<Rational>> {
    Halfspace::new(to_vec(normal)?, to_rational(offset)?).map_err(value_error)
}

fn halfspaces(items: &Bound<'_, PyAny>) -> PyResult<Vec<Halfspace<Rational>>> {
    items
        .try_iter()?
        .map(|pair| {
            let (n, o): (Bound<'_, PyAny>, Bound<'_, PyAny>) = pair?.extract()?;
            halfspace(&n, &o)
        })
        .collect()
}

/// A convex domain: all of R^d or an H-polyhedron.
#[pyclass(name = "Domain", module = "powerdiag_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDomain {
    inner: geometry::Domain<Rational>,
}

#[pymethods]
impl PyDomain {
    #[staticmethod]
    fn full(dim: usize) -> Self {
        PyDomain {
            inner: geometry::Domain::full(dim),
        }
    }

    #[staticmethod]
    #[pyo3(name = "box")]
    fn boxed(lo: &Bound<'_, PyAny>, hi: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = geometry::Domain::boxed(&to_vec(lo)?, &to_vec(hi)?).map_err(value_error)?;
        Ok(PyDomain { inner })
    }

    /// The probability simplex over `outcomes` outcomes, last coordinate dropped.
    #[staticmethod]
    fn simplex(outcomes: usize) -> PyResult<Self> {
        let inner = powerdiag::projected_simplex(outcomes).map_err(value_error)?;
        Ok(PyDomain { inner })
    }

    /// `halfspaces` is a list of `(normal, offset)` pairs.
    #[staticmethod]
    fn from_halfspaces(dim: usize, halfspaces_: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = geometry::Domain::new(dim, halfspaces(halfspaces_)?).map_err(value_error)?;
        Ok(PyDomain { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!(
            "Domain(dim={}, halfspaces={})",
            self.inner.dim(),
            self.inner.halfspaces().len()
        )
    }
}

/// Cells with one separator per ordered pair, or raw per-cell constraints.
#[pyclass(name = "CellComplex", module = "powerdiag_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCellComplex {
    inner: geometry::CellComplex<Rational>,
    domain: Option<geometry::Domain<Rational>>,
}

#[pymethods]
impl PyCellComplex {
    /// `separators` maps `(i, j)` to `(normal, offset)`; mirrors are added.
    #[staticmethod]
    fn paired(dim: usize, k: usize, separators: &Bound<'_, PyDict>) -> PyResult<Self> {
        let mut seps = BTreeMap::new();
        for (key, val) in separators.iter() {
            let (i, j): (usize, usize) = key.extract()?;
            let (n, o): (Bound<'_, PyAny>, Bound<'_, PyAny>) = val.extract()?;
            seps.insert((i, j), halfspace(&n, &o)?);
        }
        let inner = geometry::CellComplex::paired(dim, k, seps)
            .map_err(value_error)?
            .with_mirrors();
        Ok(PyCellComplex {
            inner,
            domain: None,
        })
    }

    /// Each cell is a list of `(normal, offset)` pairs.
    #[staticmethod]
    fn raw(dim: usize, cells: &Bound<'_, PyAny>) -> PyResult<Self> {
        let cells = cells
            .try_iter()?
            .map(|c| halfspaces(&c?))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = geometry::CellComplex::raw(dim, cells).map_err(value_error)?;
        Ok(PyCellComplex {
            inner,
            domain: None,
        })
    }

    /// Parses a complex document; an inline domain is kept as the default.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = ComplexDocument::from_json(text).map_err(value_error)?;
        let inner = doc.to_complex(Tolerance::DEFAULT).map_err(value_error)?;
        let domain = match doc.domain {
            Some(_) => Some(doc.to_domain(Tolerance::DEFAULT).map_err(value_error)?),
            None => None,
        };
        Ok(PyCellComplex { inner, domain })
    }

    fn to_json(&self) -> String {
        let domain = self.domain.as_ref().map(DomainDocument::from_domain);
        ComplexDocument::from_complex(&self.inner, domain).to_json()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<String>> {
        self.inner.labels().map(<[String]>::to_vec)
    }

    /// The inline domain from the document, if any.
    #[getter]
    fn domain(&self) -> Option<PyDomain> {
        self.domain.clone().map(|inner| PyDomain { inner })
    }

    /// Neighbour sets `J_i` within `domain` (default: inline domain, else R^d).
    #[pyo3(signature = (domain=None))]
    fn adjacency(&self, domain: Option<&PyDomain>) -> PyResult<Vec<Vec<usize>>> {
        let dom = self.resolve(domain);
        let adj = compute_adjacency(&self.inner, &dom).map_err(value_error)?;
        Ok(adj
            .index_sets
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("CellComplex(dim={}, k={})", self.inner.dim(), self.inner.k())
    }
}

impl PyCellComplex {
    fn resolve(&self, domain: Option<&PyDomain>) -> geometry::Domain<Rational> {
        match (domain, &self.domain) {
            (Some(d), _) => d.inner.clone(),
            (None, Some(d)) => d.clone(),
            (None, None) => geometry::Domain::full(self.inner.dim()),
        }
    }
}

/// Sites and gammas; cell i is `{x : (s_j - s_i) . x <= gamma_j - gamma_i}`.
#[pyclass(name = "PowerDiagramSpec", module = "powerdiag_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpec {
    inner: geometry::PowerDiagramSpec<Rational>,
}

#[pymethods]
impl PySpec {
    #[new]
    fn new(sites: &Bound<'_, PyAny>, gammas: &Bound<'_, PyAny>) -> PyResult<Self> {
        let sites = sites
            .try_iter()?
            .map(|s| to_vec(&s?))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = geometry::PowerDiagramSpec::new(sites, to_vec(gammas)?).map_err(value_error)?;
        Ok(PySpec { inner })
    }

    /// Builds the spec from power offsets `v_i` (power `|x - s_i|^2 - v_i`).
    #[staticmethod]
    fn from_offsets(sites: &Bound<'_, PyAny>, offsets: &Bound<'_, PyAny>) -> PyResult<Self> {
        let sites = sites
            .try_iter()?
            .map(|s| to_vec(&s?))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = geometry::PowerDiagramSpec::from_offsets(sites, &to_vec(offsets)?)
            .map_err(value_error)?;
        Ok(PySpec { inner })
    }

    #[getter]
    fn sites<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.inner.sites().iter().map(|s| fractions(py, s)).collect()
    }

    #[getter]
    fn gammas<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.inner.gammas())
    }

    fn offsets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &geometry::offsets_from_gammas(&self.inner).offsets)
    }

    /// Indices of all sites of minimum power at `x`.
    fn classify_point(&self, x: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
        let set = geometry::classify_point(&to_vec(x)?, &self.inner).map_err(value_error)?;
        Ok(set.into_iter().collect())
    }
}

/// Sites, gammas, scalings and offsets certifying a power diagram.
#[pyclass(name = "Certificate", module = "powerdiag_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: detector::Certificate<Rational>,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = CertificateDocument::from_json(text)
            .and_then(|d| d.to_certificate())
            .map_err(value_error)?;
        Ok(PyCertificate { inner })
    }

    fn to_json(&self) -> String {
        CertificateDocument::from_certificate(&self.inner, None).to_json()
    }

    #[getter]
    fn spec(&self) -> PySpec {
        PySpec {
            inner: self.inner.spec.clone(),
        }
    }

    #[getter]
    fn lambdas<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in &self.inner.lambdas {
            d.set_item(*k, fraction(py, v)?)?;
        }
        Ok(d)
    }

    #[getter]
    fn offsets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.inner.offsets.offsets)
    }

    #[getter]
    fn shifted_offsets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.inner.offsets.shifted)
    }

    /// `sqrt` of the shifted offsets, as floats.
    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.offsets.weights()
    }
}

#[pyclass(name = "DetectionResult", module = "powerdiag_py", frozen, skip_from_py_object)]
struct PyDetectionResult {
    inner: detector::DetectionResult<Rational>,
}

#[pymethods]
impl PyDetectionResult {
    /// `"IsPowerDiagram"`, `"NotPowerDiagram"` or `"InvalidInput"`.
    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.name()
    }

    #[getter]
    fn is_power_diagram(&self) -> bool {
        matches!(self.inner.verdict, Verdict::IsPowerDiagram(_))
    }

    #[getter]
    fn reason(&self) -> Option<String> {
        match &self.inner.verdict {
            Verdict::InvalidInput(r) => Some(r.clone()),
            _ => None,
        }
    }

    #[getter]
    fn certificate(&self) -> Option<PyCertificate> {
        self.inner
            .verdict
            .certificate()
            .map(|c| PyCertificate { inner: c.clone() })
    }

    #[getter]
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyDict>>> {
        let Some(s) = &self.inner.stats else {
            return Ok(None);
        };
        let d = PyDict::new(py);
        d.set_item("cells", s.cells)?;
        d.set_item("dim", s.dim)?;
        d.set_item("ordered_pairs", s.ordered_pairs)?;
        d.set_item("constraints", s.grouped_constraints)?;
        d.set_item("variables", s.variables)?;
        d.set_item("pivots", s.pivots)?;
        Ok(Some(d))
    }

    fn to_json(&self) -> String {
        VerdictDocument::from_result(&self.inner, true).to_json()
    }

    fn __repr__(&self) -> String {
        format!("DetectionResult({})", self.inner.verdict.name())
    }
}

/// Decides whether `complex` (within `domain`) is a power diagram.
#[pyfunction]
#[pyo3(signature = (complex, domain=None))]
fn detect(complex: &PyCellComplex, domain: Option<&PyDomain>) -> PyResult<PyDetectionResult> {
    let dom = complex.resolve(domain);
    let inner = detector::detect(&complex.inner, &dom)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(PyDetectionResult { inner })
}

#[pyfunction]
#[pyo3(signature = (complex, certificate, domain=None))]
fn verify_certificate(
    complex: &PyCellComplex,
    certificate: &PyCertificate,
    domain: Option<&PyDomain>,
) -> PyResult<bool> {
    let dom = complex.resolve(domain);
    detector::verify_certificate(&complex.inner, &dom, &certificate.inner).map_err(value_error)
}

/// The complex of the spec's power diagram restricted to `domain`.
#[pyfunction]
#[pyo3(signature = (spec, domain=None))]
fn forward_construct(spec: &PySpec, domain: Option<&PyDomain>) -> PyResult<PyCellComplex> {
    let dom = domain
        .map(|d| d.inner.clone())
        .unwrap_or_else(|| geometry::Domain::full(spec.inner.dim()));
    let inner = geometry::forward_construct(&spec.inner, &dom).map_err(value_error)?;
    Ok(PyCellComplex {
        inner,
        domain: Some(dom),
    })
}

/// `|x - site|^2 - offset`.
#[pyfunction]
fn power_value<'py>(
    py: Python<'py>,
    x: &Bound<'_, PyAny>,
    site: &Bound<'_, PyAny>,
    offset: &Bound<'_, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let v = geometry::power_value(&to_vec(x)?, &to_vec(site)?, &to_rational(offset)?)
        .map_err(value_error)?;
    fraction(py, &v)
}

/// Dimension of `{x : ineqs} ∩ {x : eqs as equalities}`; -1 when empty.
#[pyfunction]
#[pyo3(signature = (dim, inequalities, equalities=None))]
fn polyhedron_dimension(
    dim: usize,
    inequalities: &Bound<'_, PyAny>,
    equalities: Option<&Bound<'_, PyAny>>,
) -> PyResult<isize> {
    let eqs = match equalities {
        Some(e) => halfspaces(e)?,
        None => Vec::new(),
    };
    lp::polyhedron_dimension(dim, &halfspaces(inequalities)?, &eqs).map_err(value_error)
}

/// Feasibility of `A_eq x = b_eq`, `A x <= b`, `x_j >= l_j`. Constraints are
/// `(coeffs, rhs)` pairs; `lower_bounds` maps variable index to bound.
/// Returns `None` when infeasible, else a point.
#[pyfunction]
#[pyo3(signature = (num_vars, equalities=None, inequalities=None, lower_bounds=None))]
fn find_feasible<'py>(
    py: Python<'py>,
    num_vars: usize,
    equalities: Option<&Bound<'_, PyAny>>,
    inequalities: Option<&Bound<'_, PyAny>>,
    lower_bounds: Option<&Bound<'_, PyDict>>,
) -> PyResult<Option<Bound<'py, PyList>>> {
    let mut sys = LinearSystem::<Rational>::new(num_vars);
    for (rows, is_eq) in [(equalities, true), (inequalities, false)] {
        let Some(rows) = rows else { continue };
        for row in rows.try_iter()? {
            let (a, b): (Bound<'_, PyAny>, Bound<'_, PyAny>) = row?.extract()?;
            let (a, b) = (to_vec(&a)?, to_rational(&b)?);
            if is_eq {
                sys.add_equality(a, b);
            } else {
                sys.add_inequality(a, b);
            }
        }
    }
    if let Some(lb) = lower_bounds {
        for (j, v) in lb.iter() {
            let j: usize = j.extract()?;
            if j >= num_vars {
                return Err(value_error(format!("variable {j} out of range")));
            }
            sys.set_lower_bound(j, to_rational(&v)?);
        }
    }
    let res = lp::find_feasible(&sys).map_err(value_error)?;
    match (res.status, res.point) {
        (Status::Feasible, Some(p)) => Ok(Some(fractions(py, &p)?)),
        _ => Ok(None),
    }
}

#[pymodule]
fn powerdiag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_class::<PyCellComplex>()?;
    m.add_class::<PySpec>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyDetectionResult>()?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(forward_construct, m)?)?;
    m.add_function(wrap_pyfunction!(power_value, m)?)?;
    m.add_function(wrap_pyfunction!(polyhedron_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(find_feasible, m)?)?;
    Ok(())
}
