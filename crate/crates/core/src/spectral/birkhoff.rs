use super::integrate::{integrate_on_grid, step_grid, SolverConfig};
use crate::error::{Error, Result};
use crate::model::order_roots;
use crate::regularize::FEvaluator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Numerical stand-in for the exponential solution `y_l`, sampled on a grid
/// ordered by increasing `x`.
#[derive(Clone, Debug)]
pub struct BirkhoffSolution {
    /// `rho * omega_l`.
    pub mode: Complex64,
    /// Endpoint where the seed was placed.
    pub start: f64,
    pub grid: Vec<f64>,
    pub values: Vec<DVector<Complex64>>,
}

impl BirkhoffSolution {
    /// Values divided by the free solution `(rho w)^j exp(rho w x)`.
    pub fn normalized(&self) -> Vec<DVector<Complex64>> {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(&x, v)| {
                DVector::from_fn(v.len(), |j, _| v[j] / (self.mode.powu(j as u32) * (self.mode * x).exp()))
            })
            .collect()
    }
}

/// Seeds the free-system vector `((rho w_l)^j)_j exp(rho w_l start)` at the
/// endpoint where the mode is smallest and integrates toward the other end,
/// so the mode dominates and is followed stably.
pub fn birkhoff_seed(
    f: &FEvaluator,
    rho: Complex64,
    l: usize,
    x_max: f64,
    config: &SolverConfig,
) -> Result<BirkhoffSolution> {
    let n = f.n();
    if l == 0 || l > n {
        return Err(Error::IndexOutOfRange(format!("mode {l} for n = {n}")));
    }
    let ctx = order_roots(rho, n)?;
    if !ctx.ties().is_empty() {
        return Err(Error::SectorBoundary(format!("rho = {rho} gives tied exponents")));
    }
    let mode = ctx.exponent(l);
    let exponent = mode.re.abs() * x_max;
    if exponent > config.exponent_guard {
        return Err(Error::ExponentGuard(exponent));
    }
    let start = if mode.re > 0.0 { 0.0 } else { x_max };
    let end = x_max - start;
    let scale = (mode * start).exp();
    let seed = DMatrix::from_fn(n, 1, |j, _| mode.powu(j as u32) * scale);
    let grid = step_grid(start, end, config.steps.max(1), f.breakpoints());
    let mut values = Vec::with_capacity(grid.len());
    integrate_on_grid(f, rho.powu(n as u32), &grid, seed, config.overflow_bound, |_, _, y| {
        values.push(y.column(0).into_owned())
    })?;
    let mut grid = grid;
    if start > end {
        grid.reverse();
        values.reverse();
    }
    Ok(BirkhoffSolution { mode, start, grid, values })
}
