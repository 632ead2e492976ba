use super::integrate::{integrate_on_grid, step_grid, SolverConfig};
use crate::error::Result;
use crate::model::BoundaryForm;
use crate::regularize::FEvaluator;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Solutions `C_k` with `U_s(C_k) = delta_{s,k}`, sampled on the step grid.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    pub lambda: Complex64,
    pub grid: Vec<f64>,
    pub values: Vec<DMatrix<Complex64>>,
}

impl FundamentalMatrix {
    pub fn last(&self) -> &DMatrix<Complex64> {
        &self.values[self.values.len() - 1]
    }

    pub fn determinants(&self) -> Vec<Complex64> {
        self.values.iter().map(|c| c.clone().determinant()).collect()
    }

    /// `max_i |det C(x_i) - det C(0)| / |det C(0)|`.
    pub fn det_drift(&self) -> f64 {
        let dets = self.determinants();
        let d0 = dets[0];
        dets.iter().map(|d| (d - d0).norm() / d0.norm()).fold(0.0, f64::max)
    }
}

/// Starts from `C(0) = U^{-1}` and integrates to `x_end`.
pub fn fundamental_c(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    x_end: f64,
    config: &SolverConfig,
) -> Result<FundamentalMatrix> {
    let grid = step_grid(0.0, x_end, config.steps.max(1), f.breakpoints());
    let mut values = Vec::with_capacity(grid.len());
    integrate_on_grid(f, lambda, &grid, u.inverse(), config.overflow_bound, |_, _, y| values.push(y.clone()))?;
    Ok(FundamentalMatrix { lambda, grid, values })
}
