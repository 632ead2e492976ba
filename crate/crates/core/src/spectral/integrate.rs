use crate::error::{Error, Result};
use crate::model::Side;
use crate::regularize::FEvaluator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Numerical settings shared by the shooting solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Total number of RK4 steps across the integration range.
    pub steps: usize,
    /// Solution norms above this abort with `Overflow`.
    pub overflow_bound: f64,
    /// Limit on `|Re(rho w)| X` for unnormalized exponential seeds.
    pub exponent_guard: f64,
    /// Boundary systems with a larger condition number are flagged.
    pub condition_threshold: f64,
    /// Sector for the root `rho` of `lambda`; principal root when `None`.
    pub sector: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            steps: 4000,
            overflow_bound: 1e250,
            exponent_guard: 40.0,
            condition_threshold: 1e12,
            sector: None,
        }
    }
}

impl SolverConfig {
    pub fn with_steps(steps: usize) -> Self {
        Self { steps, ..Self::default() }
    }
}

/// Step endpoints from `x0` to `x1` (either direction). Every point of
/// `nodes` strictly between them becomes a grid point; the step budget is
/// shared among the pieces in proportion to their length, at least one each.
pub fn step_grid(x0: f64, x1: f64, steps: usize, nodes: &[f64]) -> Vec<f64> {
    let (lo, hi) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
    let mut cuts: Vec<f64> = nodes.iter().copied().filter(|&b| b > lo && b < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let counts = allocate_steps(&cuts, steps);
    let mut grid = vec![lo];
    for (w, &k) in cuts.windows(2).zip(&counts) {
        let len = w[1] - w[0];
        for i in 1..k {
            grid.push(w[0] + len * i as f64 / k as f64);
        }
        grid.push(w[1]);
    }
    if x0 > x1 {
        grid.reverse();
    }
    grid
}

/// Largest-remainder split of `steps` over the pieces between `cuts`, with at
/// least one step per piece.
fn allocate_steps(cuts: &[f64], steps: usize) -> Vec<usize> {
    let total = cuts[cuts.len() - 1] - cuts[0];
    let shares: Vec<f64> = cuts.windows(2).map(|w| steps as f64 * (w[1] - w[0]) / total).collect();
    let mut counts: Vec<usize> = shares.iter().map(|s| (s.floor() as usize).max(1)).collect();
    let assigned: usize = counts.iter().sum();
    if assigned < steps {
        let mut order: Vec<usize> = (0..shares.len()).collect();
        order.sort_by(|&a, &b| (shares[b] - shares[b].floor()).total_cmp(&(shares[a] - shares[a].floor())));
        for &i in order.iter().cycle().take(steps - assigned) {
            counts[i] += 1;
        }
    }
    counts
}

fn system_at(f: &FEvaluator, lambda: Complex64, x: f64, side: Side, buf: &mut (Vec<f64>, DMatrix<f64>)) -> DMatrix<Complex64> {
    let n = f.n();
    f.eval_into(x, side, &mut buf.0, &mut buf.1);
    let mut a = buf.1.map(|v| Complex64::new(v, 0.0));
    a[(n - 1, 0)] += lambda;
    a
}

/// One classical RK4 step for `Y' = A(x) Y` from `a` to `b`, taking
/// one-sided limits of the coefficients toward the step interior.
fn rk4_step(
    f: &FEvaluator,
    lambda: Complex64,
    a: f64,
    b: f64,
    y: &DMatrix<Complex64>,
    buf: &mut (Vec<f64>, DMatrix<f64>),
) -> DMatrix<Complex64> {
    let h = Complex64::new(b - a, 0.0);
    let (start_side, end_side) = if b > a { (Side::Right, Side::Left) } else { (Side::Left, Side::Right) };
    let a0 = system_at(f, lambda, a, start_side, buf);
    let am = system_at(f, lambda, 0.5 * (a + b), Side::Right, buf);
    let a1 = system_at(f, lambda, b, end_side, buf);
    let half = Complex64::new(0.5, 0.0);
    let k1 = &a0 * y;
    let k2 = &am * (y + &k1 * (h * half));
    let k3 = &am * (y + &k2 * (h * half));
    let k4 = &a1 * (y + &k3 * h);
    let two = Complex64::new(2.0, 0.0);
    y + (k1 + &k2 * two + &k3 * two + k4) * (h / Complex64::new(6.0, 0.0))
}

fn check_finite(y: &DMatrix<Complex64>, x: f64, bound: f64) -> Result<()> {
    let norm = y.norm();
    if !norm.is_finite() || norm > bound {
        return Err(Error::Overflow(x));
    }
    Ok(())
}

fn check_domain(f: &FEvaluator, x0: f64, x1: f64) -> Result<()> {
    for x in [x0, x1] {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::DomainViolation(x));
        }
    }
    let _ = f;
    Ok(())
}

/// Integrates `Y' = (F + lambda E_{n,1}) Y` on the given grid. After every
/// step `visit(x, &mut Y)` may inspect or rescale the state.
pub fn integrate_on_grid(
    f: &FEvaluator,
    lambda: Complex64,
    grid: &[f64],
    y0: DMatrix<Complex64>,
    overflow_bound: f64,
    mut visit: impl FnMut(usize, f64, &mut DMatrix<Complex64>),
) -> Result<DMatrix<Complex64>> {
    if grid.len() < 2 {
        return Err(Error::Config("integration grid needs at least two points".into()));
    }
    check_domain(f, grid[0], grid[grid.len() - 1])?;
    let n = f.n();
    let mut buf = (Vec::with_capacity(n), DMatrix::zeros(n, n));
    let mut y = y0;
    visit(0, grid[0], &mut y);
    for (i, w) in grid.windows(2).enumerate() {
        y = rk4_step(f, lambda, w[0], w[1], &y, &mut buf);
        check_finite(&y, w[1], overflow_bound)?;
        visit(i + 1, w[1], &mut y);
    }
    Ok(y)
}

/// `v(x1)` for `v' = (F + lambda E_{n,1}) v`, `v(x0) = v0`, using `steps` RK4 steps.
pub fn integrate_system(
    f: &FEvaluator,
    lambda: Complex64,
    x0: f64,
    x1: f64,
    v0: &DVector<Complex64>,
    steps: usize,
) -> Result<DVector<Complex64>> {
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if v0.len() != f.n() {
        return Err(Error::LengthMismatch { expected: f.n(), actual: v0.len() });
    }
    if x0 == x1 {
        return Ok(v0.clone());
    }
    let grid = step_grid(x0, x1, steps, f.breakpoints());
    let y0 = DMatrix::from_column_slice(v0.len(), 1, v0.as_slice());
    let y = integrate_on_grid(f, lambda, &grid, y0, SolverConfig::default().overflow_bound, |_, _, _| {})?;
    Ok(y.column(0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_orders, CoefficientFunction, CoefficientSet};
    use crate::symbolic::rational::{int, ratio};

    fn free(n: usize) -> FEvaluator {
        FEvaluator::from_coefficients(&CoefficientSet::zero(crate::model::SingularityOrders::regular(n).unwrap()))
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_respects_nodes_and_direction() {
        let g = step_grid(0.0, 1.0, 10, &[0.25, 2.0]);
        assert!(g.contains(&0.25));
        assert_eq!(g.first(), Some(&0.0));
        assert_eq!(g.last(), Some(&1.0));
        assert_eq!(g.len(), 11);
        let b = step_grid(1.0, 0.0, 10, &[0.25]);
        assert_eq!(b.first(), Some(&1.0));
        assert_eq!(b.last(), Some(&0.0));
        assert!(step_grid(0.0, 1.0, 1, &[0.5]).len() == 3);
    }

    #[test]
    fn cosh_sinh() {
        let v = integrate_system(&free(2), c(1.0), 0.0, 1.0, &DVector::from_vec(vec![c(1.0), c(0.0)]), 1000).unwrap();
        assert!((v[0] - c(1.0f64.cosh())).norm() < 1e-12);
        assert!((v[1] - c(1.0f64.sinh())).norm() < 1e-12);
    }

    #[test]
    fn linear_solution() {
        let v = integrate_system(&free(2), c(0.0), 0.0, 1.0, &DVector::from_vec(vec![c(0.0), c(1.0)]), 3).unwrap();
        assert!((v[0] - c(1.0)).norm() < 1e-15 && (v[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn reversal_returns_start() {
        let o = validate_orders(2, &[1]).unwrap();
        let bump = CoefficientFunction::bump(ratio(1, 4), ratio(3, 4), int(2), Default::default()).unwrap();
        let f = FEvaluator::from_coefficients(&CoefficientSet::new(o, vec![bump]).unwrap());
        let v0 = DVector::from_vec(vec![c(0.3), Complex64::new(-1.0, 0.5)]);
        let lambda = Complex64::new(2.0, 1.0);
        let v1 = integrate_system(&f, lambda, 0.0, 1.0, &v0, 2000).unwrap();
        let back = integrate_system(&f, lambda, 1.0, 0.0, &v1, 2000).unwrap();
        assert!((back - v0).norm() < 1e-10);
    }

    #[test]
    fn overflow_and_domain() {
        let v0 = DVector::from_vec(vec![c(1.0), c(1.0)]);
        let err = integrate_system(&free(2), c(1.0e6), 0.0, 1.0, &v0, 100).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
        let err = integrate_system(&free(2), c(1.0), -1.0, 1.0, &v0, 100).unwrap_err();
        assert_eq!(err, Error::DomainViolation(-1.0));
    }
}
