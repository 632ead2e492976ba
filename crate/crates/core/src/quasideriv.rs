//! Quasi-derivatives in exact arithmetic, the classical expression for
//! polynomial coefficients, and the first-order system matrix.

use crate::error::{Error, Result};
use crate::model::{validate_orders, CoefficientFunction, CoefficientSet, Side, SingularityOrders};
use crate::regularize::{build_f_symbolic, FEvaluator};
use crate::symbolic::rational::ratio;
use crate::symbolic::{RationalPolynomial, SymbolicMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

/// The chain `y^[0], ..., y^[n]` for polynomial data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySolution {
    pub quasi: Vec<RationalPolynomial>,
}

/// Quasi-derivatives of `y` for the matrix `f` with its symbols replaced by `sigma`.
pub fn quasi_chain_with(f: &SymbolicMatrix, sigma: &[RationalPolynomial], y: &RationalPolynomial) -> PolySolution {
    let n = f.nrows();
    let fx = f.substitute(sigma);
    let mut quasi = vec![y.clone()];
    for k in 1..=n {
        let mut next = quasi[k - 1].derivative();
        for j in 1..=k {
            let term = &fx[k - 1][j - 1] * &quasi[j - 1];
            next = &next - &term;
        }
        quasi.push(next);
    }
    PolySolution { quasi }
}

pub fn quasi_chain(coeffs: &CoefficientSet, y: &RationalPolynomial) -> Result<PolySolution> {
    let sigma = coeffs.polynomials()?;
    Ok(quasi_chain_with(&build_f_symbolic(coeffs.orders()), &sigma, y))
}

/// `l_n(y)` expanded term by term for smooth (polynomial) coefficients.
pub fn classical_apply(coeffs: &CoefficientSet, y: &RationalPolynomial) -> Result<RationalPolynomial> {
    let sigma = coeffs.polynomials()?;
    let o = coeffs.orders();
    let (m, tau) = (o.m(), o.tau());
    let d = |p: &RationalPolynomial, k: usize| p.nth_derivative(k);
    let signed = |p: RationalPolynomial, e: usize| if e % 2 == 0 { p } else { -p };
    let mut out = d(y, o.n());
    for k in 0..m {
        let nu = 2 * k;
        let i = o.order(nu);
        let s = d(&sigma[nu], i);
        out = &out + &signed(d(&(&s * &d(y, k)), k), i + k);
    }
    for k in 0..(m + tau).saturating_sub(1) {
        let nu = 2 * k + 1;
        let i = o.order(nu);
        let s = d(&sigma[nu], i);
        let a = d(&(&s * &d(y, k)), k + 1);
        let b = d(&(&s * &d(y, k + 1)), k);
        out = &out + &signed(&a + &b, i + k + 1);
    }
    Ok(out)
}

/// `l_n(y) - y^[n]`; identically zero when the regularization is correct.
pub fn verify_regularization(coeffs: &CoefficientSet, y: &RationalPolynomial) -> Result<RationalPolynomial> {
    let classical = classical_apply(coeffs, y)?;
    let chain = quasi_chain(coeffs, y)?;
    Ok(&classical - &chain.quasi[coeffs.n()])
}

/// `F(x) + lambda E_{n,1}`.
pub fn system_matrix(f: &FEvaluator, lambda: Complex64, x: f64) -> Result<DMatrix<Complex64>> {
    system_matrix_side(f, lambda, x, Side::Right)
}

pub fn system_matrix_side(f: &FEvaluator, lambda: Complex64, x: f64, side: Side) -> Result<DMatrix<Complex64>> {
    let n = f.n();
    let mut out = f.eval(x, side)?.map(|v| Complex64::new(v, 0.0));
    out[(n - 1, 0)] += lambda;
    Ok(out)
}

fn random_poly<R: Rng>(rng: &mut R, max_degree: usize) -> RationalPolynomial {
    let deg = rng.gen_range(0..=max_degree);
    RationalPolynomial::new((0..=deg).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect())
}

/// A random admissible order tuple for `n`.
pub fn random_orders<R: Rng>(rng: &mut R, n: usize) -> Result<SingularityOrders> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let orders: Vec<usize> = (0..n - 1)
        .map(|nu| rng.gen_range(0..=crate::model::order_bound(n, nu)))
        .collect();
    validate_orders(n, &orders)
}

/// Random orders, polynomial coefficients and test function of degree at most `max_degree`.
pub fn random_case<R: Rng>(rng: &mut R, n: usize, max_degree: usize) -> Result<(CoefficientSet, RationalPolynomial)> {
    let orders = random_orders(rng, n)?;
    let sigma = (0..n - 1)
        .map(|_| CoefficientFunction::polynomial(random_poly(rng, max_degree)))
        .collect();
    let coeffs = CoefficientSet::new(orders, sigma)?;
    Ok((coeffs, random_poly(rng, max_degree)))
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub orders: Vec<usize>,
    pub seed: u64,
    /// Degree of the residual, `None` when it vanishes identically.
    pub residual_degree: Option<usize>,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        self.residual_degree.is_none()
    }
}

/// Runs one randomized regularization check, reproducible from `seed`.
pub fn verify_seed(n: usize, seed: u64, max_degree: usize) -> Result<VerifyRow> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (coeffs, y) = random_case(&mut rng, n, max_degree)?;
    let residual = verify_regularization(&coeffs, &y)?;
    Ok(VerifyRow { n, orders: coeffs.orders().orders().to_vec(), seed, residual_degree: residual.degree() })
}
