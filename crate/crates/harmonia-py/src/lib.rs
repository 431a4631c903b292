//! Python bindings: the main harmonia types and operations as a native
//! extension module.
//!
//! Build with `cargo build -p harmonia-py --release`; the resulting
//! `libharmonia_py.so` imports as the module `harmonia_py` once renamed to
//! `harmonia_py.so` on the Python path (see `python/smoke_test.py`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py_err(e: harmonia::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A sparse homogeneous polynomial.
#[pyclass(frozen)]
struct Polynomial {
    inner: harmonia::HomogeneousPolynomial,
}

#[pymethods]
impl Polynomial {
    /// Polynomial(n, degree, terms) with terms a list of (exponents, coef).
    #[new]
    fn new(n: usize, degree: usize, terms: Vec<(Vec<u32>, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: harmonia::HomogeneousPolynomial::new(n, degree, terms).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: harmonia::HomogeneousPolynomial::from_json_str(text).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.inner.terms().map(|(e, c)| (e.to_vec(), c)).collect()
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&x).map_err(to_py_err)
    }

    fn laplacian(&self) -> Self {
        Self {
            inner: self.inner.laplacian(),
        }
    }

    fn multiply_norm_power(&self, m: usize) -> Self {
        Self {
            inner: self.inner.multiply_norm_power(m),
        }
    }

    fn scale(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    fn add(&self, other: &Polynomial) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.add(&other.inner).map_err(to_py_err)?,
        })
    }

    fn l2_norm(&self, rule: &CubatureRule) -> PyResult<f64> {
        self.inner.l2_norm(&rule.inner).map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Polynomial(n={}, degree={}, terms={})",
            self.inner.n(),
            self.inner.degree(),
            self.inner.num_terms()
        )
    }
}

/// A cubature rule on S^{n-1}.
#[pyclass(frozen)]
struct CubatureRule {
    inner: std::sync::Arc<harmonia::CubatureRule>,
}

#[pymethods]
impl CubatureRule {
    /// The sign-change-invariant product rule of algebraic degree 2t.
    #[staticmethod]
    fn product(n: usize, t: usize) -> PyResult<Self> {
        Ok(Self {
            inner: harmonia::cached_rule(n, t).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn algebraic_degree(&self) -> usize {
        self.inner.algebraic_degree()
    }

    fn nodes(&self) -> Vec<Vec<f64>> {
        self.inner.nodes().to_vec()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    fn integrate(&self, f: &Polynomial) -> PyResult<f64> {
        self.inner.integrate(&f.inner).map_err(to_py_err)
    }

    fn verify_exactness(&self, degree: usize) -> f64 {
        self.inner.verify_exactness(degree)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CubatureRule(n={}, degree={}, nodes={})",
            self.inner.n(),
            self.inner.algebraic_degree(),
            self.inner.len()
        )
    }
}

/// Kernel coefficients in the normalized Gegenbauer basis.
#[pyclass(frozen)]
struct GegenbauerKernel {
    inner: harmonia::GegenbauerKernel,
}

#[pymethods]
impl GegenbauerKernel {
    /// The normalized pure-power kernel t^{2s}.
    #[staticmethod]
    fn power(n: usize, s: usize) -> PyResult<Self> {
        if n < 3 || s < 1 {
            return Err(PyValueError::new_err(
                "power kernels need n >= 3 and s >= 1",
            ));
        }
        Ok(Self {
            inner: harmonia::power_kernel(n, s),
        })
    }

    /// The Fang-Fawzi eigenvalue kernel; returns (kernel, rho).
    #[staticmethod]
    fn fang_fawzi(n: usize, k: usize, s: usize) -> PyResult<(Self, f64)> {
        let sol = harmonia::fang_fawzi_kernel(n, k, s).map_err(to_py_err)?;
        Ok((Self { inner: sol.kernel }, sol.rho))
    }

    /// Expand an even univariate polynomial (monomial coefficients).
    #[staticmethod]
    fn expand(coefficients: Vec<f64>, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: harmonia::gegenbauer_expand(&coefficients, n).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn identity(n: usize, s: usize) -> Self {
        Self {
            inner: harmonia::GegenbauerKernel::identity(n, s),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s()
    }

    /// λ_{2j} for j = 0..=s.
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas().to_vec()
    }

    fn evaluate(&self, t: f64) -> f64 {
        self.inner.evaluate(t)
    }

    fn frobenius_threshold(&self, k: usize) -> PyResult<f64> {
        harmonia::frobenius_threshold(&self.inner, k).map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "GegenbauerKernel(n={}, s={})",
            self.inner.n(),
            self.inner.s()
        )
    }
}

/// One hierarchy level of a sweep.
#[pyclass(frozen)]
struct BoundResult {
    #[pyo3(get)]
    s: usize,
    #[pyo3(get)]
    kernel: String,
    #[pyo3(get)]
    tau: f64,
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    cubature_size: usize,
    #[pyo3(get)]
    elapsed_ms: f64,
}

#[pymethods]
impl BoundResult {
    fn __repr__(&self) -> String {
        format!(
            "BoundResult(s={}, kernel={}, tau={:.6}, lower={:.6}, upper={:.6})",
            self.s, self.kernel, self.tau, self.lower, self.upper
        )
    }
}

#[pyfunction]
fn harmonic_dim(n: usize, j: usize) -> usize {
    harmonia::harmonic_dim(n, j)
}

#[pyfunction]
fn sphere_area(n: usize) -> f64 {
    harmonia::sphere_area(n)
}

#[pyfunction]
fn sphere_monomial_integral(exponents: Vec<u32>) -> f64 {
    harmonia::sphere_monomial_integral(&exponents)
}

#[pyfunction]
fn normalized_gegenbauer(n: usize, j: usize, t: f64) -> f64 {
    harmonia::normalized_gegenbauer(n, j, t)
}

#[pyfunction]
fn zonal_harmonic(n: usize, j: usize, y: Vec<f64>) -> PyResult<Polynomial> {
    Ok(Polynomial {
        inner: harmonia::zonal_harmonic(n, j, &y).map_err(to_py_err)?,
    })
}

/// Components f_0, f_2, ..., f_{2k} of the harmonic decomposition.
#[pyfunction]
fn harmonic_decompose(f: &Polynomial) -> PyResult<Vec<Polynomial>> {
    let expansion = harmonia::harmonic_decompose(&f.inner).map_err(to_py_err)?;
    Ok(expansion
        .components()
        .iter()
        .map(|c| Polynomial { inner: c.clone() })
        .collect())
}

#[pyfunction]
fn apply_gamma(f: &Polynomial, kernel: &GegenbauerKernel) -> PyResult<Polynomial> {
    Ok(Polynomial {
        inner: harmonia::apply_gamma(&f.inner, &kernel.inner).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn apply_gamma_inverse(f: &Polynomial, kernel: &GegenbauerKernel) -> PyResult<Polynomial> {
    Ok(Polynomial {
        inner: harmonia::apply_gamma_inverse(&f.inner, &kernel.inner).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn convolve_on_nodes(
    f: &Polynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
    x: Vec<f64>,
) -> PyResult<f64> {
    harmonia::convolve_on_nodes(&f.inner, &kernel.inner, &rule.inner, &x).map_err(to_py_err)
}

/// The optimization-free lower bound β*.
#[pyfunction]
fn lower_bound(f: &Polynomial, kernel: &GegenbauerKernel, rule: &CubatureRule) -> PyResult<f64> {
    harmonia::lower_bound(&f.inner, &kernel.inner, &rule.inner).map_err(to_py_err)
}

/// The cubature-node upper bound α^quad.
#[pyfunction]
fn upper_bound(f: &Polynomial, rule: &CubatureRule) -> PyResult<f64> {
    harmonia::upper_bound(&f.inner, &rule.inner).map_err(to_py_err)
}

#[pyfunction]
fn certify_membership(
    f: &Polynomial,
    kernel: &GegenbauerKernel,
    rule: &CubatureRule,
) -> PyResult<bool> {
    harmonia::certify_membership(&f.inner, &kernel.inner, &rule.inner).map_err(to_py_err)
}

/// Sweep hierarchy levels s_min..=s_max with the given kernel family
/// ("power" or "fangfawzi"); `shared_rule` evaluates every level on the
/// single largest rule instead of per-level exact-degree rules.
#[pyfunction]
#[pyo3(signature = (f, kind, s_min, s_max, shared_rule = false))]
fn sweep(
    f: &Polynomial,
    kind: &str,
    s_min: usize,
    s_max: usize,
    shared_rule: bool,
) -> PyResult<Vec<BoundResult>> {
    let kind: harmonia::KernelKind = kind.parse().map_err(to_py_err)?;
    let policy = if shared_rule {
        harmonia::RulePolicy::SharedMax
    } else {
        harmonia::RulePolicy::PerLevel
    };
    let results = harmonia::sweep(&f.inner, kind, s_min, s_max, policy).map_err(to_py_err)?;
    Ok(results
        .into_iter()
        .map(|r| BoundResult {
            s: r.s,
            kernel: r.kernel_kind.to_string(),
            tau: r.tau,
            lower: r.lower,
            upper: r.upper,
            cubature_size: r.cubature_size,
            elapsed_ms: r.elapsed_ms,
        })
        .collect())
}

/// Deterministic quasi-random points on S^{n-1}.
#[pyfunction]
fn sphere_sample(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    harmonia::sphere_sample(n, count, seed)
}

#[pymodule]
fn harmonia_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    m.add_class::<CubatureRule>()?;
    m.add_class::<GegenbauerKernel>()?;
    m.add_class::<BoundResult>()?;
    m.add_function(wrap_pyfunction!(harmonic_dim, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_area, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_monomial_integral, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_gegenbauer, m)?)?;
    m.add_function(wrap_pyfunction!(zonal_harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(apply_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(apply_gamma_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_on_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(certify_membership, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_sample, m)?)?;
    Ok(())
}
