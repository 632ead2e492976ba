use super::fundamental::fundamental_c;
use super::integrate::{integrate_on_grid, step_grid, SolverConfig};
use crate::error::{Error, Result};
use crate::model::json::complex_matrix;
use crate::model::{order_roots, rho_from_lambda, BoundaryForm, Geometry, Side};
use crate::regularize::FEvaluator;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// How `M` relates the fundamental system `C` and the Weyl system `Phi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `Phi = C M`, so that `M_{s,k} = U_s(Phi_k)`.
    PhiEqualsCM,
    /// `C = Phi M`; the inverse of the other orientation.
    CEqualsPhiM,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylFlag {
    /// Some boundary system exceeded the condition threshold (likely near a pole).
    IllConditioned,
    /// `Re(rho w_k)` ties between consecutive roots, so the Weyl solutions are
    /// not separated by growth.
    SectorTie,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylSample {
    #[serde(with = "crate::model::json::complex")]
    pub lambda: Complex64,
    #[serde(with = "crate::model::json::complex")]
    pub rho: Complex64,
    #[serde(with = "complex_matrix")]
    pub m: DMatrix<Complex64>,
    pub geometry: Geometry,
    pub orientation: Orientation,
    /// Largest condition number among the boundary systems that were solved.
    pub condition: f64,
    pub flags: Vec<WeylFlag>,
}

impl WeylSample {
    /// `M_{s,k}` with 1-based indices.
    pub fn entry(&self, s: usize, k: usize) -> Complex64 {
        self.m[(s - 1, k - 1)]
    }

    /// The same sample with the other orientation (`M` replaced by its inverse).
    pub fn reoriented(&self) -> WeylSample {
        let inv = unit_lower_inverse(&self.m);
        WeylSample {
            m: inv,
            orientation: match self.orientation {
                Orientation::PhiEqualsCM => Orientation::CEqualsPhiM,
                Orientation::CEqualsPhiM => Orientation::PhiEqualsCM,
            },
            ..self.clone()
        }
    }

    /// `(max |M_{s,k}|` over `s < k`, `max |M_{k,k} - 1|)`.
    pub fn triangularity_defect(&self) -> (f64, f64) {
        let n = self.m.nrows();
        let mut above: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for s in 0..n {
            diag = diag.max((self.m[(s, s)] - Complex64::new(1.0, 0.0)).norm());
            for k in s + 1..n {
                above = above.max(self.m[(s, k)].norm());
            }
        }
        (above, diag)
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }
}

fn unit_lower_inverse(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut inv = DMatrix::<Complex64>::identity(n, n);
    for c in 0..n {
        for r in c + 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in c..r {
                acc += m[(r, k)] * inv[(k, c)];
            }
            inv[(r, c)] = -acc;
        }
    }
    inv
}

/// Weyl matrix together with the Weyl solutions `Phi(x)` (columns are the
/// quasi-derivative vectors of `Phi_k`) at the requested points.
#[derive(Clone, Debug)]
pub struct WeylSolutions {
    pub sample: WeylSample,
    pub points: Vec<f64>,
    pub phi: Vec<DMatrix<Complex64>>,
}

fn condition_number(a: &DMatrix<Complex64>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn solve_checked(a: DMatrix<Complex64>, rhs: DVector<Complex64>, lambda: Complex64) -> Result<(DVector<Complex64>, f64)> {
    let cond = condition_number(&a);
    let singular = || Error::SingularAtLambda(format!("{lambda}"));
    if !cond.is_finite() {
        return Err(singular());
    }
    let sol = a.lu().solve(&rhs).ok_or_else(singular)?;
    if sol.iter().any(|z| !z.is_finite()) {
        return Err(singular());
    }
    Ok((sol, cond))
}

fn unit(n: usize, k: usize) -> DVector<Complex64> {
    let mut e = DVector::zeros(n);
    e[k] = Complex64::new(1.0, 0.0);
    e
}

/// Weyl matrix on `[0, 1]` with forms `U` at 0 and `V` at 1.
pub fn weyl_matrix_finite(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    v: &BoundaryForm,
    config: &SolverConfig,
) -> Result<WeylSample> {
    Ok(weyl_solutions_finite(f, lambda, u, v, &[], config)?.sample)
}

pub fn weyl_solutions_finite(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    v: &BoundaryForm,
    points: &[f64],
    config: &SolverConfig,
) -> Result<WeylSolutions> {
    let n = f.n();
    if u.n() != n || v.n() != n {
        return Err(Error::ShapeMismatch(format!("boundary forms must have size {n}")));
    }
    for &p in points {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainViolation(p));
        }
    }
    let rho = rho_from_lambda(lambda, n, config.sector).unwrap_or(Complex64::new(0.0, 0.0));
    let mut nodes: Vec<f64> = f.breakpoints().to_vec();
    nodes.extend_from_slice(points);
    let grid = step_grid(0.0, 1.0, config.steps.max(1), &nodes);
    let mut stored: Vec<Option<DMatrix<Complex64>>> = vec![None; points.len()];
    let c0 = u.inverse();
    let c1 = integrate_on_grid(f, lambda, &grid, c0.clone(), config.overflow_bound, |_, x, y| {
        for (slot, &p) in stored.iter_mut().zip(points) {
            if p == x {
                *slot = Some(y.clone());
            }
        }
    })?;
    let u_c0 = u.dense() * &c0;
    let v_c1 = v.dense() * &c1;
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    let mut worst: f64 = 1.0;
    for k in 0..n {
        let mut s = DMatrix::<Complex64>::zeros(n, n);
        for r in 0..n {
            let row = if r <= k { u_c0.row(r) } else { v_c1.row(r) };
            s.row_mut(r).copy_from(&row);
        }
        let (sol, cond) = solve_checked(s, unit(n, k), lambda)?;
        worst = worst.max(cond);
        a.set_column(k, &sol);
    }
    let m = u.dense() * (&c0 * &a);
    let mut flags = Vec::new();
    if worst > config.condition_threshold {
        flags.push(WeylFlag::IllConditioned);
    }
    let phi = stored
        .into_iter()
        .map(|c| c.expect("probe point lies on the grid") * &a)
        .collect();
    Ok(WeylSolutions {
        sample: WeylSample {
            lambda,
            rho,
            m,
            geometry: Geometry::FiniteInterval,
            orientation: Orientation::PhiEqualsCM,
            condition: worst,
            flags,
        },
        points: points.to_vec(),
        phi,
    })
}

/// Modified Gram-Schmidt: replaces `w` by an orthonormal basis with the
/// same nested column spans and returns the triangular factor.
fn orthonormalize(w: &mut DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = w.ncols();
    let mut r = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for i in 0..j {
            let proj = w.column(i).dotc(&w.column(j));
            r[(i, j)] = proj;
            let qi = w.column(i).into_owned();
            let mut cj = w.column_mut(j);
            cj.axpy(-proj, &qi, Complex64::new(1.0, 0.0));
        }
        let norm = w.column(j).norm();
        r[(j, j)] = Complex64::new(norm, 0.0);
        if norm > 0.0 {
            w.column_mut(j).unscale_mut(norm);
        }
    }
    r
}

/// `g R^{-1}` for upper-triangular `r`.
fn right_solve_upper(g: &DMatrix<Complex64>, r: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = r.ncols();
    let mut out = DMatrix::<Complex64>::zeros(g.nrows(), n);
    for j in 0..n {
        let mut col = g.column(j).into_owned();
        for i in 0..j {
            col.axpy(-r[(i, j)], &out.column(i).into_owned(), Complex64::new(1.0, 0.0));
        }
        out.set_column(j, &(col / r[(j, j)]));
    }
    out
}

/// Checks that beyond the truncation point the system is the free one.
fn check_free_tail(f: &FEvaluator, x: f64) -> Result<()> {
    let n = f.n();
    let fx = f.eval(x, Side::Right)?;
    for r in 0..n {
        for c in 0..n {
            let expected = if c == r + 1 { 1.0 } else { 0.0 };
            if fx[(r, c)] != expected {
                return Err(Error::InvalidCoefficient(format!(
                    "F does not reduce to the free system beyond x = {x}"
                )));
            }
        }
    }
    Ok(())
}

/// Weyl matrix on the half-line truncated at `x_max`, beyond which the
/// coefficients must vanish.
pub fn weyl_matrix_halfline(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    x_max: f64,
    config: &SolverConfig,
) -> Result<WeylSample> {
    Ok(weyl_solutions_halfline(f, lambda, u, x_max, &[], config)?.sample)
}

/// The decaying solutions are seeded at `x_max` with the exact exponential
/// solutions of the free system, integrated back to 0 with the frame
/// re-orthonormalized after every step, and combined so that the first `k`
/// forms take the values `delta_{s,k}`.
pub fn weyl_solutions_halfline(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    x_max: f64,
    points: &[f64],
    config: &SolverConfig,
) -> Result<WeylSolutions> {
    let rho = rho_from_lambda(lambda, f.n(), config.sector)?;
    halfline_impl(f, lambda, rho, u, x_max, points, config)
}

/// As [`weyl_solutions_halfline`] with the root `rho` given directly
/// (`lambda = rho^n`), which fixes the ray even on sector boundaries.
pub fn weyl_solutions_halfline_rho(
    f: &FEvaluator,
    rho: Complex64,
    u: &BoundaryForm,
    x_max: f64,
    points: &[f64],
    config: &SolverConfig,
) -> Result<WeylSolutions> {
    halfline_impl(f, rho.powu(f.n() as u32), rho, u, x_max, points, config)
}

fn halfline_impl(
    f: &FEvaluator,
    lambda: Complex64,
    rho: Complex64,
    u: &BoundaryForm,
    x_max: f64,
    points: &[f64],
    config: &SolverConfig,
) -> Result<WeylSolutions> {
    let n = f.n();
    if u.n() != n {
        return Err(Error::ShapeMismatch(format!("boundary forms must have size {n}")));
    }
    if !x_max.is_finite() || x_max <= 0.0 {
        return Err(Error::Config(format!("truncation point must be positive, got {x_max}")));
    }
    match f.support_end() {
        None => return Err(Error::NonIntegrableTail),
        Some(end) if end > x_max => {
            return Err(Error::TruncationInsideSupport { truncation: x_max, support_end: end });
        }
        _ => {}
    }
    check_free_tail(f, x_max)?;
    for &p in points {
        if !(0.0..=x_max).contains(&p) {
            return Err(Error::DomainViolation(p));
        }
    }
    let ctx = order_roots(rho, n)?;
    let mut flags = Vec::new();
    if !ctx.ties().is_empty() {
        flags.push(WeylFlag::SectorTie);
    }
    let seeds = DMatrix::from_fn(n, n, |j, r| ctx.exponent(r + 1).powu(j as u32));

    let mut nodes: Vec<f64> = f.breakpoints().to_vec();
    nodes.extend_from_slice(points);
    let grid = step_grid(x_max, 0.0, config.steps.max(1), &nodes);
    let mut frames: Vec<Option<DMatrix<Complex64>>> = vec![None; points.len()];
    let w0 = integrate_on_grid(f, lambda, &grid, seeds, config.overflow_bound, |_, x, w| {
        let r = orthonormalize(w);
        for g in frames.iter_mut().flatten() {
            *g = right_solve_upper(g, &r);
        }
        for (slot, &p) in frames.iter_mut().zip(points) {
            if p == x && slot.is_none() {
                *slot = Some(w.clone());
            }
        }
    })?;

    let b = u.dense() * &w0;
    let mut d = DMatrix::<Complex64>::zeros(n, n);
    let mut worst: f64 = 1.0;
    for k in 0..n {
        let block = b.view((0, 0), (k + 1, k + 1)).into_owned();
        let (sol, cond) = solve_checked(block, unit(k + 1, k), lambda)?;
        worst = worst.max(cond);
        d.view_mut((0, k), (k + 1, 1)).copy_from(&sol);
    }
    if worst > config.condition_threshold {
        flags.push(WeylFlag::IllConditioned);
    }
    let m = &b * &d;
    let phi = frames
        .into_iter()
        .map(|g| g.expect("probe point lies on the grid") * &d)
        .collect();
    Ok(WeylSolutions {
        sample: WeylSample {
            lambda,
            rho,
            m,
            geometry: Geometry::HalfLine { truncation: x_max },
            orientation: Orientation::PhiEqualsCM,
            condition: worst,
            flags,
        },
        points: points.to_vec(),
        phi,
    })
}

/// Dispatches on the geometry; `v` is required on the finite interval.
pub fn weyl_matrix(
    f: &FEvaluator,
    lambda: Complex64,
    u: &BoundaryForm,
    v: Option<&BoundaryForm>,
    geometry: Geometry,
    config: &SolverConfig,
) -> Result<WeylSample> {
    match geometry {
        Geometry::FiniteInterval => {
            let v = v.ok_or_else(|| Error::Config("finite interval needs right-end forms V".into()))?;
            weyl_matrix_finite(f, lambda, u, v, config)
        }
        Geometry::HalfLine { truncation } => weyl_matrix_halfline(f, lambda, u, truncation, config),
    }
}

/// Determinant drift of the fundamental matrix over `[0, x_end]`.
pub fn wronskian_drift(f: &FEvaluator, lambda: Complex64, u: &BoundaryForm, x_end: f64, config: &SolverConfig) -> Result<f64> {
    Ok(fundamental_c(f, lambda, u, x_end, config)?.det_drift())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoefficientSet, SingularityOrders};

    fn free2() -> FEvaluator {
        FEvaluator::from_coefficients(&CoefficientSet::zero(SingularityOrders::regular(2).unwrap()))
    }

    fn robin(h: f64) -> BoundaryForm {
        BoundaryForm::with_entries(vec![1, 0], &[(2, 1, Complex64::new(h, 0.0))]).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn finite_free_coth() {
        let v = BoundaryForm::identity(2);
        let w = weyl_matrix_finite(&free2(), c(1.0), &robin(0.0), &v, &SolverConfig::with_steps(2000)).unwrap();
        let expected = -1.0 / 1.0f64.tanh();
        assert!((w.entry(2, 1) - c(expected)).norm() < 1e-9);
        let (above, diag) = w.triangularity_defect();
        assert!(above < 1e-12 && diag < 1e-12);
        let inv = w.reoriented();
        assert!((inv.entry(2, 1) + w.entry(2, 1)).norm() < 1e-15);
    }

    #[test]
    fn halfline_free_closed_form() {
        for h in [0.0, 1.0] {
            let w = weyl_matrix_halfline(&free2(), c(4.0), &robin(h), 10.0, &SolverConfig::with_steps(4000)).unwrap();
            assert!((w.entry(2, 1) - c(1.0 / (h - 2.0))).norm() < 1e-8, "h={h}: {}", w.entry(2, 1));
        }
    }

    #[test]
    fn halfline_solutions_decay() {
        let sol = weyl_solutions_halfline(&free2(), c(4.0), &robin(0.0), 10.0, &[0.0, 1.0], &SolverConfig::with_steps(4000))
            .unwrap();
        // Phi_1 = exp(-2x) / (0 - 2)
        let expected = (-2.0f64).exp() / -2.0;
        assert!((sol.phi[1][(0, 0)] - c(expected)).norm() < 1e-8);
        assert!((sol.phi[0][(0, 0)] - c(-0.5)).norm() < 1e-8);
    }

    #[test]
    fn halfline_rejects_unbounded_support() {
        let o = SingularityOrders::regular(2).unwrap();
        let p = crate::model::CoefficientFunction::constant(crate::symbolic::rational::int(1));
        let f = FEvaluator::from_coefficients(&CoefficientSet::new(o, vec![p]).unwrap());
        assert_eq!(
            weyl_matrix_halfline(&f, c(4.0), &robin(0.0), 10.0, &SolverConfig::default()).unwrap_err(),
            Error::NonIntegrableTail
        );
    }

    #[test]
    fn orthonormalization_round_trip() {
        let w = DMatrix::from_fn(3, 3, |r, c| Complex64::new(if r == c { 4.0 } else { (r + 2 * c) as f64 * 0.3 }, r as f64 - c as f64));
        let mut q = w.clone();
        let r = orthonormalize(&mut q);
        assert!((&q * &r - &w).norm() < 1e-12);
        assert!((right_solve_upper(&w, &r) - &q).norm() < 1e-12);
    }
}
