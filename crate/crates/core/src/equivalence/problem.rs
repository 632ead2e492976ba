use crate::error::{Error, Result};
use crate::model::{BoundaryForm, CoefficientSet, Geometry};
use crate::regularize::FEvaluator;
use crate::spectral::{weyl_matrix, SolverConfig, WeylSample};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complete boundary value problem: coefficients, forms at zero, forms at
/// the right end (finite interval only) and the geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ProblemSpec {
    coeffs: CoefficientSet,
    u: BoundaryForm,
    v: Option<BoundaryForm>,
    geometry: Geometry,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    coeffs: CoefficientSet,
    #[serde(rename = "U")]
    u: BoundaryForm,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    v: Option<BoundaryForm>,
    geometry: Geometry,
}

impl TryFrom<RawSpec> for ProblemSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        ProblemSpec::new(raw.coeffs, raw.u, raw.v, raw.geometry)
    }
}

impl From<ProblemSpec> for RawSpec {
    fn from(s: ProblemSpec) -> Self {
        RawSpec { coeffs: s.coeffs, u: s.u, v: s.v, geometry: s.geometry }
    }
}

impl ProblemSpec {
    pub fn new(coeffs: CoefficientSet, u: BoundaryForm, v: Option<BoundaryForm>, geometry: Geometry) -> Result<Self> {
        let n = coeffs.n();
        if u.n() != n {
            return Err(Error::ShapeMismatch(format!("U has size {}, expected {n}", u.n())));
        }
        match (&v, geometry) {
            (Some(v), Geometry::FiniteInterval) if v.n() != n => {
                return Err(Error::ShapeMismatch(format!("V has size {}, expected {n}", v.n())))
            }
            (Some(_), Geometry::FiniteInterval) => {}
            (None, Geometry::FiniteInterval) => {
                return Err(Error::Config("finite interval needs right-end forms V".into()))
            }
            (Some(_), Geometry::HalfLine { .. }) => {
                return Err(Error::Config("right-end forms V are only used on the finite interval".into()))
            }
            (None, Geometry::HalfLine { truncation }) => {
                if !(truncation.is_finite() && truncation > 0.0) {
                    return Err(Error::Config(format!("truncation must be positive, got {truncation}")));
                }
            }
        }
        Ok(Self { coeffs, u, v, geometry })
    }

    pub fn half_line(coeffs: CoefficientSet, u: BoundaryForm, truncation: f64) -> Result<Self> {
        Self::new(coeffs, u, None, Geometry::HalfLine { truncation })
    }

    pub fn finite(coeffs: CoefficientSet, u: BoundaryForm, v: BoundaryForm) -> Result<Self> {
        Self::new(coeffs, u, Some(v), Geometry::FiniteInterval)
    }

    /// Same problem with a new half-line truncation point.
    pub fn with_truncation(&self, truncation: f64) -> Result<Self> {
        if self.geometry.is_finite() {
            return Err(Error::Config("truncation applies to half-line problems only".into()));
        }
        Self::new(self.coeffs.clone(), self.u.clone(), None, Geometry::HalfLine { truncation })
    }

    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn u(&self) -> &BoundaryForm {
        &self.u
    }

    pub fn v(&self) -> Option<&BoundaryForm> {
        self.v.as_ref()
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn n(&self) -> usize {
        self.coeffs.n()
    }

    pub fn evaluator(&self) -> FEvaluator {
        FEvaluator::from_coefficients(&self.coeffs)
    }

    pub fn weyl(&self, lambda: Complex64, config: &SolverConfig) -> Result<WeylSample> {
        weyl_matrix(&self.evaluator(), lambda, &self.u, self.v.as_ref(), self.geometry, config)
    }
}
