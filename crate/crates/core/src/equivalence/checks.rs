use super::problem::ProblemSpec;
use crate::error::{Error, Result};
use crate::model::json::complex_vec;
use crate::model::{BoundaryForm, CoefficientSet};
use crate::regularize::FEvaluator;
use crate::spectral::{weyl_solutions_finite, SolverConfig};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    #[serde(with = "complex_vec")]
    pub lambdas: Vec<Complex64>,
    /// Entrywise maximum of `|M_A - M_B|` at each grid point.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

impl InvarianceReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

fn max_abs(it: impl Iterator<Item = Complex64>) -> f64 {
    it.map(|z| z.norm()).fold(0.0, f64::max)
}

/// Compares the Weyl matrices of two problems on the same geometry.
pub fn weyl_invariance_check(
    a: &ProblemSpec,
    b: &ProblemSpec,
    lambdas: &[Complex64],
    config: &SolverConfig,
) -> Result<InvarianceReport> {
    if a.geometry() != b.geometry() {
        return Err(Error::Config("problems live on different geometries".into()));
    }
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch(format!("orders {} and {} differ", a.n(), b.n())));
    }
    if lambdas.is_empty() {
        return Err(Error::Config("empty lambda grid".into()));
    }
    let deviations = lambdas
        .par_iter()
        .map(|&lambda| {
            let ma = a.weyl(lambda, config)?.m;
            let mb = b.weyl(lambda, config)?.m;
            Ok(max_abs((ma - mb).iter().copied()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(InvarianceReport { lambdas: lambdas.to_vec(), deviations, max_deviation })
}

#[derive(Clone, Debug, Serialize)]
pub struct VEquivalenceReport {
    pub same_permutation: bool,
    /// Largest entrywise difference between the Weyl solution matrices,
    /// over all sampled `x` and `lambda`.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub equivalent: bool,
}

/// Finite interval: do `V` and `V_alt` give the same Weyl solutions?
#[allow(clippy::too_many_arguments)]
pub fn v_equivalence_check(
    coeffs: &CoefficientSet,
    u: &BoundaryForm,
    v: &BoundaryForm,
    v_alt: &BoundaryForm,
    lambdas: &[Complex64],
    points: &[f64],
    tolerance: f64,
    config: &SolverConfig,
) -> Result<VEquivalenceReport> {
    if lambdas.is_empty() || points.is_empty() {
        return Err(Error::Config("empty lambda or x grid".into()));
    }
    if points.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::Config("sample points must lie in [0, 1]".into()));
    }
    let f = FEvaluator::from_coefficients(coeffs);
    let deviations = lambdas
        .par_iter()
        .map(|&lambda| {
            let a = weyl_solutions_finite(&f, lambda, u, v, points, config)?;
            let b = weyl_solutions_finite(&f, lambda, u, v_alt, points, config)?;
            Ok(a.phi.iter().zip(&b.phi).map(|(pa, pb)| max_abs((pa - pb).iter().copied())).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = deviations.into_iter().fold(0.0, f64::max);
    Ok(VEquivalenceReport {
        same_permutation: v.permutation() == v_alt.permutation(),
        max_deviation,
        tolerance,
        equivalent: max_deviation <= tolerance,
    })
}
