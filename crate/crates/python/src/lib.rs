//! Python bindings. Matrices and chains cross the boundary as their text
//! formats; scalars as strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symfact_core::algebra::parse::parse_gaussian;
use symfact_core::algebra::{GaussianRational, MultiPoly};
use symfact_core::bounds::{k_bounds, BoundInput};
use symfact_core::factor::{factor_elementary_7, random_symplectic, search_k_factor, NumericConfig, SearchStatus, SearchStrategy};
use symfact_core::fiber::{classify_stratum, in_singular_set, jacobian_phi, reduce_fiber, verify_reduction, Parity};
use symfact_core::io::{format_elementary_chain, format_factor_chain, format_matrix, parse_chain, parse_matrix, to_gaussian, ChainDocument, Ring};
use symfact_core::symplectic::{self, is_symplectic, FormKind};
use symfact_core::Error;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_ring(s: &str) -> PyResult<Ring> {
    if s == "gaussian" {
        return Ok(Ring::Gaussian);
    }
    s.strip_prefix("poly:")
        .and_then(|m| m.parse().ok())
        .map(Ring::Poly)
        .ok_or_else(|| PyValueError::new_err(format!("unknown ring '{}'", s)))
}

fn parse_vector(values: Vec<String>) -> PyResult<Vec<GaussianRational>> {
    values.iter().map(|v| parse_gaussian(v).map_err(py_err)).collect()
}

#[pyclass(name = "Matrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: symfact_core::algebra::Matrix<MultiPoly>,
}

impl PyMatrix {
    fn ring(&self) -> Ring {
        Ring::of(self.inner.entries())
    }
}

#[pymethods]
impl PyMatrix {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let (inner, _) = parse_matrix(text).map_err(py_err)?;
        Ok(PyMatrix { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, k, seed, ring = "gaussian"))]
    fn random_symplectic(n: usize, k: usize, seed: u64, ring: &str) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("n must be positive"));
        }
        Ok(PyMatrix { inner: random_symplectic(n, k, seed, parse_ring(ring)?) })
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.cols()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<String> {
        if i >= self.inner.rows() || j >= self.inner.cols() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(i, j).to_string())
    }

    #[pyo3(signature = (form = "std"))]
    fn is_symplectic(&self, form: &str) -> PyResult<bool> {
        let kind = match form {
            "std" => FormKind::Standard,
            "skew" => FormKind::SkewDiag,
            other => return Err(PyValueError::new_err(format!("unknown form '{}'", other))),
        };
        is_symplectic(&self.inner, kind).map_err(py_err)
    }

    fn rank(&self) -> PyResult<usize> {
        Ok(to_gaussian(&self.inner).map_err(py_err)?.exact_rank())
    }

    fn to_text(&self) -> String {
        format_matrix(&self.inner, self.ring())
    }

    fn __mul__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.mul(&other.inner).map_err(py_err)? })
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{}, {})", self.inner.rows(), self.inner.cols(), self.ring())
    }
}

#[pyclass(name = "ElementaryChain", frozen)]
struct PyElementaryChain {
    inner: symplectic::ElementaryChain<MultiPoly>,
}

#[pymethods]
impl PyElementaryChain {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        match parse_chain(text).map_err(py_err)? {
            ChainDocument::Elementary(inner) => Ok(PyElementaryChain { inner }),
            ChainDocument::Factors(_) => Err(PyValueError::new_err("expected 'factor minus|plus' blocks")),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_text(&self) -> String {
        format_elementary_chain(&self.inner)
    }

    fn psi(&self) -> PyMatrix {
        PyMatrix { inner: symplectic::psi(&self.inner) }
    }

    fn phi(&self) -> Vec<String> {
        symplectic::phi(&self.inner).to_vec().iter().map(|v| v.to_string()).collect()
    }

    fn in_singular_set(&self) -> bool {
        in_singular_set(&self.inner)
    }

    fn jacobian(&self) -> PyResult<PyMatrix> {
        let chain = self.inner.try_map(|p| p.constant_value().ok_or(Error::PolynomialEntries)).map_err(py_err)?;
        let j = jacobian_phi(&chain).map_err(py_err)?;
        Ok(PyMatrix { inner: j.map(|v| MultiPoly::constant(v.clone())) })
    }

    /// Seven standard factors of a single elementary matrix.
    fn factor7(&self) -> PyResult<PyFactorChain> {
        if self.inner.len() != 1 {
            return Err(PyValueError::new_err("factor7 expects a chain with one factor"));
        }
        let r = factor_elementary_7(&self.inner.factors()[0]).map_err(py_err)?;
        Ok(PyFactorChain { inner: r.chain })
    }
}

#[pyclass(name = "FactorChain", frozen)]
struct PyFactorChain {
    inner: symplectic::FactorChain<MultiPoly>,
}

#[pymethods]
impl PyFactorChain {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        match parse_chain(text).map_err(py_err)? {
            ChainDocument::Factors(inner) => Ok(PyFactorChain { inner }),
            ChainDocument::Elementary(_) => Err(PyValueError::new_err("expected 'factor lower|upper' blocks")),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn sides(&self) -> Vec<String> {
        self.inner.factors().iter().map(|f| f.side().to_string()).collect()
    }

    fn product(&self) -> PyMatrix {
        PyMatrix { inner: self.inner.product() }
    }

    fn to_text(&self) -> String {
        format_factor_chain(&self.inner)
    }
}

/// Returns `(status, factors_text_or_None, min_residual_or_None)`.
#[pyfunction]
#[pyo3(signature = (target, k, strategy = "exact", restarts = 50, seed = None))]
fn search(target: &PyMatrix, k: usize, strategy: &str, restarts: usize, seed: Option<u64>) -> PyResult<(String, Option<String>, Option<f64>)> {
    let t = to_gaussian(&target.inner).map_err(py_err)?;
    let strategy = match (strategy, seed) {
        ("exact", _) => SearchStrategy::ExactElimination,
        ("numeric", Some(seed)) => SearchStrategy::NumericMultistart(NumericConfig::new(restarts, seed)),
        ("numeric", None) => return Err(PyValueError::new_err("numeric search needs a seed")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown strategy '{}'", other))),
    };
    let out = search_k_factor(&t, k, strategy).map_err(py_err)?;
    let status = match out.status {
        SearchStatus::Found => "found",
        SearchStatus::NotFoundEvidence => "not-found-evidence",
    };
    Ok((status.to_string(), out.factors.as_ref().map(format_factor_chain), out.residual.map(|r| r.min_residual)))
}

/// Returns `(lower, upper_or_None, derivation_lines)`.
#[pyfunction]
#[pyo3(signature = (n, d, ktilde = None, kcont2 = None))]
fn bounds(n: usize, d: usize, ktilde: Option<usize>, kcont2: Option<usize>) -> PyResult<(usize, Option<usize>, Vec<String>)> {
    let r = k_bounds(&BoundInput { n, d, known_ktilde: ktilde, known_kcont: kcont2 }).map_err(py_err)?;
    let lines = r.derivation.iter().map(|rule| format!("{}: {}", rule.name, rule.detail)).collect();
    Ok((r.lower, r.upper, lines))
}

#[pyfunction]
#[pyo3(name = "classify_stratum")]
fn classify(target: Vec<String>, k: usize) -> PyResult<String> {
    let v = parse_vector(target)?;
    Ok(classify_stratum(&v, Parity::of(k)).map_err(py_err)?.to_string())
}

/// The elimination plan as text.
#[pyfunction]
#[pyo3(name = "reduce_fiber")]
fn reduce(target: Vec<String>, k: usize) -> PyResult<String> {
    let v = parse_vector(target)?;
    let n = v.len() / 2;
    Ok(reduce_fiber(&v, k, n).map_err(py_err)?.to_string())
}

/// Returns `(passed, failed)`.
#[pyfunction]
#[pyo3(name = "verify_reduction")]
fn verify(target: Vec<String>, k: usize, trials: usize, seed: u64) -> PyResult<(usize, usize)> {
    let v = parse_vector(target)?;
    let n = v.len() / 2;
    let plan = reduce_fiber(&v, k, n).map_err(py_err)?;
    let report = verify_reduction(&plan, trials, seed).map_err(py_err)?;
    Ok((report.pass, report.fail))
}

#[pymodule]
fn symfact(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyElementaryChain>()?;
    m.add_class::<PyFactorChain>()?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
