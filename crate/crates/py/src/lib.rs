//! Python bindings. Problems cross the boundary as the same JSON documents
//! the CLI reads; matrices come back as nested lists.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use quasiweyl::equivalence::{apply, weyl_invariance_check, Correspondence, Direction, ProblemSpec};
use quasiweyl::model::{self, Geometry, SingularityOrders};
use quasiweyl::quasideriv::verify_seed;
use quasiweyl::regularize::{build_f_symbolic, build_q};
use quasiweyl::spectral::{asymptotics_probe, SolverConfig};
use quasiweyl::Error;

create_exception!(pyquasiweyl, ConfigurationError, PyValueError, "Invalid input or configuration.");
create_exception!(pyquasiweyl, NumericalError, PyArithmeticError, "The computation failed numerically.");

fn to_py(e: Error) -> PyErr {
    if e.is_configuration() {
        ConfigurationError::new_err(e.to_string())
    } else {
        NumericalError::new_err(e.to_string())
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| ConfigurationError::new_err(e.to_string()))
}

fn solver(steps: usize) -> SolverConfig {
    SolverConfig::with_steps(steps)
}

#[pyclass(name = "Orders", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOrders(SingularityOrders);

#[pymethods]
impl PyOrders {
    #[new]
    fn new(n: usize, orders: Vec<usize>) -> PyResult<Self> {
        model::validate_orders(n, &orders).map(Self).map_err(to_py)
    }

    /// Every admissible order tuple for `n`.
    #[staticmethod]
    fn enumerate(n: usize) -> PyResult<Vec<Self>> {
        Ok(SingularityOrders::enumerate(n).map_err(to_py)?.into_iter().map(Self).collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn orders(&self) -> Vec<usize> {
        self.0.orders().to_vec()
    }

    fn singular_set(&self) -> Vec<usize> {
        self.0.singular_set().members.into_iter().collect()
    }

    /// `(Q, F)` as nested lists of strings, or LaTeX when `latex` is set.
    #[pyo3(signature = (latex = false))]
    fn matrices<'py>(&self, py: Python<'py>, latex: bool) -> PyResult<Bound<'py, PyAny>> {
        let q = build_q(&self.0);
        let f = build_f_symbolic(&self.0);
        if latex {
            (q.to_latex(), f.to_latex()).into_pyobject(py).map(Bound::into_any)
        } else {
            (q.to_strings(), f.to_strings()).into_pyobject(py).map(Bound::into_any)
        }
    }

    fn __repr__(&self) -> String {
        format!("Orders(n={}, orders={:?})", self.0.n(), self.0.orders())
    }
}

#[pyclass(name = "WeylResult", frozen, get_all)]
struct PyWeylResult {
    lambda_: Complex64,
    rho: Complex64,
    matrix: Vec<Vec<Complex64>>,
    condition: f64,
    flags: Vec<String>,
}

#[pyclass(name = "Problem", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProblem(ProblemSpec);

#[pymethods]
impl PyProblem {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Self)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| ConfigurationError::new_err(e.to_string()))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn orders(&self) -> PyOrders {
        PyOrders(self.0.coeffs().orders().clone())
    }

    /// Truncation point for half-line problems, `None` on the unit interval.
    #[getter]
    fn truncation(&self) -> Option<f64> {
        match self.0.geometry() {
            Geometry::HalfLine { truncation } => Some(truncation),
            Geometry::FiniteInterval => None,
        }
    }

    fn with_truncation(&self, truncation: f64) -> PyResult<Self> {
        self.0.with_truncation(truncation).map(Self).map_err(to_py)
    }

    #[pyo3(signature = (lam, steps = 4000))]
    fn weyl(&self, py: Python<'_>, lam: Complex64, steps: usize) -> PyResult<PyWeylResult> {
        let spec = self.0.clone();
        let s = py.detach(move || spec.weyl(lam, &solver(steps))).map_err(to_py)?;
        let matrix = s.m.row_iter().map(|r| r.iter().copied().collect()).collect();
        let flags = s
            .flags
            .iter()
            .map(|f| serde_json::to_value(f).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
            .collect();
        Ok(PyWeylResult { lambda_: s.lambda, rho: s.rho, matrix, condition: s.condition, flags })
    }

    /// Applies a correspondence: `"n2"` or one of `"case1_00to01"`,
    /// `"case2_01to11"`, `"case3_10to20"`, in direction `"raise_order"` or
    /// `"lower_order"`. Raising on the unit interval needs `free`.
    #[pyo3(signature = (correspondence, direction = "raise_order", free = None))]
    fn transform(&self, correspondence: &str, direction: &str, free: Option<f64>) -> PyResult<Self> {
        let corr: Correspondence = if correspondence == "n2" {
            from_json("\"n2\"")?
        } else {
            from_json(&format!("{{\"n4\": \"{correspondence}\"}}"))?
        };
        let dir: Direction = from_json(&format!("\"{direction}\""))?;
        apply(&self.0, corr, dir, free.map(|f| Complex64::new(f, 0.0))).map(Self).map_err(to_py)
    }
}

/// Largest entrywise deviation between the Weyl matrices of two problems.
#[pyfunction]
#[pyo3(signature = (a, b, lambdas, steps = 4000))]
fn invariance(py: Python<'_>, a: &PyProblem, b: &PyProblem, lambdas: Vec<Complex64>, steps: usize) -> PyResult<f64> {
    let (a, b) = (a.0.clone(), b.0.clone());
    py.detach(move || weyl_invariance_check(&a, &b, &lambdas, &solver(steps)))
        .map(|r| r.max_deviation)
        .map_err(to_py)
}

/// Normalized Weyl solution along a ray; returns `(limit, [(|rho|, ratio, rel_error)])`.
#[pyfunction]
#[pyo3(signature = (problem, k, j, phi, magnitudes, x, steps = 20000))]
#[allow(clippy::too_many_arguments)]
fn asymptotics(
    py: Python<'_>,
    problem: &PyProblem,
    k: usize,
    j: usize,
    phi: f64,
    magnitudes: Vec<f64>,
    x: f64,
    steps: usize,
) -> PyResult<(Complex64, Vec<(f64, Complex64, f64)>)> {
    let Geometry::HalfLine { truncation } = problem.0.geometry() else {
        return Err(ConfigurationError::new_err("asymptotics needs a half-line problem"));
    };
    let spec = problem.0.clone();
    let p = py
        .detach(move || asymptotics_probe(&spec.evaluator(), spec.u(), k, j, phi, &magnitudes, x, truncation, &solver(steps)))
        .map_err(to_py)?;
    Ok((p.limit, p.samples.iter().map(|s| (s.rho_abs, s.ratio, s.rel_error)).collect()))
}

/// Roots of unity ordered by `Re(rho w)`.
#[pyfunction]
fn order_roots(rho: Complex64, n: usize) -> PyResult<Vec<Complex64>> {
    model::order_roots(rho, n).map(|c| c.roots).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (lam, n, sector = None))]
fn rho_from_lambda(lam: Complex64, n: usize, sector: Option<usize>) -> PyResult<Complex64> {
    model::rho_from_lambda(lam, n, sector).map_err(to_py)
}

/// Randomized exact check of the regularization for one seed.
#[pyfunction]
#[pyo3(signature = (n, seed, max_degree = 6))]
fn verify(n: usize, seed: u64, max_degree: usize) -> PyResult<bool> {
    verify_seed(n, seed, max_degree).map(|r| r.passed()).map_err(to_py)
}

#[pymodule]
fn pyquasiweyl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConfigurationError", m.py().get_type::<ConfigurationError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyOrders>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyWeylResult>()?;
    m.add_function(wrap_pyfunction!(invariance, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotics, m)?)?;
    m.add_function(wrap_pyfunction!(order_roots, m)?)?;
    m.add_function(wrap_pyfunction!(rho_from_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
