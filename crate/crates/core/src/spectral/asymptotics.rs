use super::integrate::SolverConfig;
use super::weyl::weyl_solutions_halfline_rho;
use crate::error::{Error, Result};
use crate::model::json::complex;
use crate::model::{order_roots, BoundaryForm};
use crate::regularize::FEvaluator;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeSample {
    pub rho_abs: f64,
    #[serde(with = "complex")]
    pub ratio: Complex64,
    pub rel_error: f64,
}

/// Measured `Phi_k^[j](x) rho^{p_k} (rho w_k)^{-j} exp(-rho w_k x)` along a ray
/// against its limit `a0 = d_{k-1,k-1} / d_{k,k}`.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticProbe {
    pub k: usize,
    pub j: usize,
    pub phi: f64,
    pub x: f64,
    #[serde(with = "complex")]
    pub limit: Complex64,
    pub samples: Vec<ProbeSample>,
}

impl AsymptoticProbe {
    /// Errors never grow by more than the factor `1 + jitter` from one sample to the next.
    pub fn is_nonincreasing(&self, jitter: f64) -> bool {
        self.samples.windows(2).all(|w| w[1].rel_error <= w[0].rel_error * (1.0 + jitter))
    }
}

/// `d_{k,k} = det[w_l^{p_s}]_{l,s=1..k}`, with `d_{0,0} = 1`.
pub fn d_kk(roots: &[Complex64], permutation: &[usize], k: usize) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    DMatrix::from_fn(k, k, |l, s| roots[l].powu(permutation[s] as u32)).determinant()
}

pub fn limit_constant(roots: &[Complex64], permutation: &[usize], k: usize) -> Result<Complex64> {
    let den = d_kk(roots, permutation, k);
    if den.norm() < 1e-12 {
        return Err(Error::Config(format!("d_{{{k},{k}}} vanishes")));
    }
    Ok(d_kk(roots, permutation, k - 1) / den)
}

/// Half-line probe of the Weyl solution `Phi_k` at the point `x` for
/// `rho = |rho| e^{i phi}` over the given magnitudes.
#[allow(clippy::too_many_arguments)]
pub fn asymptotics_probe(
    f: &FEvaluator,
    u: &BoundaryForm,
    k: usize,
    j: usize,
    phi: f64,
    rho_magnitudes: &[f64],
    x: f64,
    x_max: f64,
    config: &SolverConfig,
) -> Result<AsymptoticProbe> {
    let n = f.n();
    if k == 0 || k > n || j >= n {
        return Err(Error::IndexOutOfRange(format!("k = {k}, j = {j} for n = {n}")));
    }
    if rho_magnitudes.is_empty() {
        return Err(Error::Config("no |rho| values given".into()));
    }
    let ray = Complex64::from_polar(1.0, phi);
    let ctx = order_roots(ray, n)?;
    if !ctx.ties().is_empty() {
        return Err(Error::SectorBoundary(format!("ray arg = {phi} gives tied exponents")));
    }
    let limit = limit_constant(&ctx.roots, u.permutation(), k)?;
    let p_k = u.permutation()[k - 1];
    let mut samples = Vec::with_capacity(rho_magnitudes.len());
    for &r in rho_magnitudes {
        let rho = ray * r;
        let sol = weyl_solutions_halfline_rho(f, rho, u, x_max, &[x], config)?;
        let mode = rho * ctx.roots[k - 1];
        let value = sol.phi[0][(j, k - 1)];
        let ratio = value * rho.powu(p_k as u32) / mode.powu(j as u32) * (-mode * x).exp();
        samples.push(ProbeSample { rho_abs: r, ratio, rel_error: (ratio - limit).norm() / limit.norm() });
    }
    Ok(AsymptoticProbe { k, j, phi, x, limit, samples })
}
