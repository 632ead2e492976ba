use super::problem::ProblemSpec;
use crate::error::{Error, Result};
use crate::model::{validate_orders, BoundaryForm, CoefficientFunction, Side};
use crate::symbolic::rational::{from_f64, int, to_f64};
use crate::symbolic::Rational;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Replace a coefficient by its antiderivative, raising its singularity order by one.
    RaiseOrder,
    LowerOrder,
}

/// The implemented fourth-order correspondences, named by `(i0, i2)` before
/// and after raising.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum N4Case {
    #[serde(rename = "case1_00to01")]
    Case1_00to01,
    #[serde(rename = "case2_01to11")]
    Case2_01to11,
    #[serde(rename = "case3_10to20")]
    Case3_10to20,
}

/// Which correspondence to apply: the second-order one or a fourth-order case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correspondence {
    N2,
    N4(N4Case),
}

impl Correspondence {
    fn n(self) -> usize {
        match self {
            Correspondence::N2 => 2,
            Correspondence::N4(_) => 4,
        }
    }

    /// Orders before and after raising.
    fn orders(self) -> (Vec<usize>, Vec<usize>) {
        match self {
            Correspondence::N2 => (vec![0], vec![1]),
            Correspondence::N4(N4Case::Case1_00to01) => (vec![0, 0, 0], vec![0, 0, 1]),
            Correspondence::N4(N4Case::Case2_01to11) => (vec![0, 0, 1], vec![1, 0, 1]),
            Correspondence::N4(N4Case::Case3_10to20) => (vec![1, 0, 0], vec![2, 0, 0]),
        }
    }

    /// Index of the coefficient that changes order.
    fn nu(self) -> usize {
        match self {
            Correspondence::N4(N4Case::Case1_00to01) => 2,
            _ => 0,
        }
    }

    /// `P` with `y~^[.] = P y^[.]`, where `s` is the raised coefficient at the point.
    pub fn transform_matrix(self, s: f64) -> DMatrix<Complex64> {
        let n = self.n();
        let mut p = DMatrix::identity(n, n);
        let s = Complex64::new(s, 0.0);
        match self {
            Correspondence::N2 => p[(1, 0)] = -s,
            Correspondence::N4(N4Case::Case1_00to01) => p[(2, 1)] = s,
            Correspondence::N4(N4Case::Case2_01to11) => p[(3, 0)] = -s,
            Correspondence::N4(N4Case::Case3_10to20) => {
                p[(2, 0)] = s;
                p[(3, 1)] = -s;
            }
        }
        p
    }

    /// Position `(r, c)` (1-based) of the entry of `L_U` that is the free
    /// parameter of the finite-interval correspondence, and the sign with
    /// which `sigma~(0)` enters `l~ - l`.
    fn free_entry(self) -> ((usize, usize), i64) {
        match self {
            Correspondence::N2 => ((2, 1), 1),
            Correspondence::N4(N4Case::Case1_00to01) => ((3, 2), -1),
            Correspondence::N4(N4Case::Case2_01to11) => ((4, 1), 1),
            Correspondence::N4(N4Case::Case3_10to20) => ((3, 1), -1),
        }
    }
}

/// Second-order correspondence on the half-line at the level of `(sigma0, h)`.
pub fn shift_n2(
    sigma0: &CoefficientFunction,
    h: Complex64,
    direction: Direction,
) -> Result<(CoefficientFunction, Complex64)> {
    match direction {
        Direction::RaiseOrder => {
            let tail = sigma0.tail_integral()?;
            let total = to_f64(&tail.value_at(&Rational::zero(), Side::Right));
            Ok((tail, h + total))
        }
        Direction::LowerOrder => {
            if !sigma0.is_integrable() {
                return Err(Error::NonIntegrableTail);
            }
            let s0 = to_f64(&sigma0.value_at(&Rational::zero(), Side::Right));
            Ok((sigma0.derivative()?.neg(), h - s0))
        }
    }
}

/// Half-line correspondence for `n = 2`.
pub fn shift_n2_spec(spec: &ProblemSpec, direction: Direction) -> Result<ProblemSpec> {
    apply(spec, Correspondence::N2, direction, None)
}

/// Half-line correspondence for one of the fourth-order cases.
pub fn shift_n4(spec: &ProblemSpec, case: N4Case, direction: Direction) -> Result<ProblemSpec> {
    apply(spec, Correspondence::N4(case), direction, None)
}

/// Finite-interval correspondence for `n = 2`. Raising needs the new `h~`;
/// lowering is determined by the data and ignores `free`.
pub fn finite_shift_n2(spec: &ProblemSpec, direction: Direction, free: Complex64) -> Result<ProblemSpec> {
    apply(spec, Correspondence::N2, direction, Some(free))
}

/// Finite-interval correspondence for `n = 4`. Raising needs the new value of
/// `l~_{3,2}`, `l~_{4,1}` or `l~_{3,1}` for cases 1, 2 and 3.
pub fn finite_shift_n4(spec: &ProblemSpec, case: N4Case, direction: Direction, free: Complex64) -> Result<ProblemSpec> {
    apply(spec, Correspondence::N4(case), direction, Some(free))
}

fn real_rational(z: Complex64, what: &str) -> Result<Rational> {
    if z.im != 0.0 {
        return Err(Error::InvalidCoefficient(format!("{what} must be real, got {z}")));
    }
    from_f64(z.re).ok_or_else(|| Error::InvalidCoefficient(format!("{what} is not finite")))
}

/// Applies a correspondence in either direction.
pub fn apply(
    spec: &ProblemSpec,
    corr: Correspondence,
    direction: Direction,
    free: Option<Complex64>,
) -> Result<ProblemSpec> {
    let n = corr.n();
    let (low, high) = corr.orders();
    let (from, to) = match direction {
        Direction::RaiseOrder => (low, high),
        Direction::LowerOrder => (high, low),
    };
    if spec.n() != n || spec.coeffs().orders().orders() != from.as_slice() {
        return Err(Error::InvalidCase(format!(
            "correspondence expects n = {n} with orders {from:?}, got n = {} with {:?}",
            spec.n(),
            spec.coeffs().orders().orders()
        )));
    }
    if n == 4 && !spec.coeffs().sigma_at(1).is_zero() {
        return Err(Error::InvalidCase("fourth-order correspondences need sigma_1 = 0".into()));
    }
    let finite = spec.geometry().is_finite();
    let nu = corr.nu();
    let sigma = spec.coeffs().sigma_at(nu);
    // `raised` is the higher-order coefficient on either side of the map.
    let (new_sigma, raised) = match direction {
        Direction::RaiseOrder => {
            if corr == Correspondence::N4(N4Case::Case3_10to20) && !sigma.is_continuous_at(&Rational::zero()) {
                return Err(Error::ContinuityAtZeroRequired);
            }
            let raised = if finite {
                let free = free.ok_or_else(|| Error::Config("finite-interval raising needs the free parameter".into()))?;
                let ((r, c), sign) = corr.free_entry();
                let l = real_rational(spec.u().l(r, c), "boundary coefficient")?;
                let target = real_rational(free, "free parameter")?;
                sigma.cumulative_integral().neg().add_constant(&((target - l) * int(sign)))
            } else {
                sigma.tail_integral()?
            };
            (raised.clone(), raised)
        }
        Direction::LowerOrder => {
            if !finite && !sigma.is_integrable() {
                return Err(Error::NonIntegrableTail);
            }
            (sigma.derivative()?.neg(), sigma.clone())
        }
    };
    let p0 = corr.transform_matrix(to_f64(&raised.value_at(&Rational::zero(), Side::Right)));
    let p1 = corr.transform_matrix(to_f64(&raised.value_at(&Rational::one(), Side::Left)));
    let map_form = |form: &BoundaryForm, p: DMatrix<Complex64>| -> Result<BoundaryForm> {
        match direction {
            Direction::RaiseOrder => form.right_multiplied(&p.try_inverse().expect("unit triangular")),
            Direction::LowerOrder => form.right_multiplied(&p),
        }
    };
    let coeffs = spec
        .coeffs()
        .with_sigma(nu, new_sigma)
        .with_orders(validate_orders(n, &to)?)?;
    let u = map_form(spec.u(), p0)?;
    let v = match spec.v() {
        Some(v) => Some(map_form(v, p1)?),
        None => None,
    };
    ProblemSpec::new(coeffs, u, v, spec.geometry())
}

