use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const SNAP: f64 = 1e-15;
const TIE_TOL: f64 = 1e-12;

/// Ordering of the `n`-th roots of unity for a given `rho`, together with the
/// index of the sector containing `rho`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorContext {
    #[serde(with = "super::json::complex")]
    pub rho: Complex64,
    /// `k` in `1..=2n`; a `rho` on a boundary ray reports the sector it opens.
    pub sector_index: usize,
    #[serde(with = "super::json::complex_vec")]
    pub roots: Vec<Complex64>,
    /// Exponent `j` with `roots[i] = exp(2 pi i j / n)`.
    pub root_exponents: Vec<usize>,
    /// Whether `rho` lies on a ray separating two sectors.
    pub on_boundary: bool,
}

impl SectorContext {
    pub fn n(&self) -> usize {
        self.roots.len()
    }

    /// `rho * omega_k` for 1-based `k`.
    pub fn exponent(&self, k: usize) -> Complex64 {
        self.rho * self.roots[k - 1]
    }

    /// Indices `k` (1-based) with `Re(rho w_k) == Re(rho w_{k+1})` up to tolerance.
    pub fn ties(&self) -> Vec<usize> {
        let scale = self.rho.norm();
        (1..self.n())
            .filter(|&k| (self.exponent(k).re - self.exponent(k + 1).re).abs() <= TIE_TOL * scale)
            .collect()
    }
}

/// `exp(2 pi i j / n)` with components rounded to exact zeros and ones where
/// appropriate.
pub fn root_of_unity(j: usize, n: usize) -> Complex64 {
    let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
    let snap = |v: f64| {
        if v.abs() < SNAP {
            0.0
        } else if (v.abs() - 1.0).abs() < SNAP {
            v.signum()
        } else {
            v
        }
    };
    Complex64::new(snap(z.re), snap(z.im))
}

fn normalized_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Sector index in `1..=2n` and whether `rho` sits on a boundary ray.
pub fn sector_of(rho: Complex64, n: usize) -> (usize, bool) {
    let t = normalized_arg(rho) * n as f64 / PI;
    let nearest = t.round();
    let on_boundary = (t - nearest).abs() < 1e-12 * (1.0 + t.abs());
    let base = if on_boundary { nearest } else { t.floor() };
    let k = (base as usize) % (2 * n) + 1;
    (k, on_boundary)
}

pub fn order_roots(rho: Complex64, n: usize) -> Result<SectorContext> {
    if rho == Complex64::new(0.0, 0.0) || !rho.is_finite() {
        return Err(Error::ZeroRho);
    }
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let scale = rho.norm();
    let mut idx: Vec<usize> = (0..n).collect();
    let w: Vec<Complex64> = (0..n).map(|j| root_of_unity(j, n)).collect();
    idx.sort_by(|&a, &b| {
        let za = rho * w[a];
        let zb = rho * w[b];
        if (za.re - zb.re).abs() <= TIE_TOL * scale {
            za.im.total_cmp(&zb.im)
        } else {
            za.re.total_cmp(&zb.re)
        }
    });
    let (sector_index, on_boundary) = sector_of(rho, n);
    Ok(SectorContext {
        rho,
        sector_index,
        roots: idx.iter().map(|&j| w[j]).collect(),
        root_exponents: idx,
        on_boundary,
    })
}

/// The `n`-th root of `lambda`: principal (`arg rho` in `[0, 2 pi / n)`) by
/// default, or the root inside the open sector `sector` when given.
pub fn rho_from_lambda(lambda: Complex64, n: usize, sector: Option<usize>) -> Result<Complex64> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroRho);
    }
    let r = lambda.norm().powf(1.0 / n as f64);
    let base = normalized_arg(lambda) / n as f64;
    let candidates = (0..n).map(|j| base + 2.0 * PI * j as f64 / n as f64);
    match sector {
        None => Ok(Complex64::from_polar(r, base)),
        Some(k) => {
            if k == 0 || k > 2 * n {
                return Err(Error::IndexOutOfRange(format!("sector {k} for n = {n}")));
            }
            let lo = PI * (k - 1) as f64 / n as f64;
            let hi = PI * k as f64 / n as f64;
            let eps = 1e-12;
            candidates
                .into_iter()
                .find(|&a| a > lo + eps && a < hi - eps)
                .map(|a| Complex64::from_polar(r, a))
                .ok_or(Error::NoRootInSector(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn n2_real_rho() {
        let ctx = order_roots(c(1.0, 0.0), 2).unwrap();
        assert_eq!(ctx.roots, vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(ctx.sector_index, 1);
        assert!(ctx.on_boundary);
    }

    #[test]
    fn n4_eighth_turn() {
        let rho = Complex64::from_polar(1.0, PI / 8.0);
        let ctx = order_roots(rho, 4).unwrap();
        assert_eq!(ctx.roots, vec![c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        let re: Vec<f64> = (1..=4).map(|k| ctx.exponent(k).re).collect();
        let expected = [-0.92388, -0.38268, 0.38268, 0.92388];
        for (a, b) in re.iter().zip(expected) {
            assert!((a - b).abs() < 1e-5);
        }
        assert_eq!(ctx.sector_index, 1);
        assert!(!ctx.on_boundary);
    }

    #[test]
    fn boundary_tie_break() {
        let ctx = order_roots(c(0.0, 1.0), 2).unwrap();
        assert_eq!(ctx.roots, vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(ctx.ties(), vec![1]);
        assert!(ctx.on_boundary);
        assert_eq!(ctx.sector_index, 2);
    }

    #[test]
    fn zero_rho_rejected() {
        assert_eq!(order_roots(c(0.0, 0.0), 3), Err(Error::ZeroRho));
    }

    #[test]
    fn principal_and_sector_roots() {
        let rho = rho_from_lambda(c(4.0, 0.0), 2, None).unwrap();
        assert!((rho - c(2.0, 0.0)).norm() < 1e-15);
        let rho = rho_from_lambda(c(-1.0, 0.0), 2, None).unwrap();
        assert!((rho - c(0.0, 1.0)).norm() < 1e-15);
        let rho = rho_from_lambda(c(0.0, 1.0), 2, Some(3)).unwrap();
        assert!((rho - Complex64::from_polar(1.0, 5.0 * PI / 4.0)).norm() < 1e-14);
        assert_eq!(rho_from_lambda(c(0.0, 1.0), 2, Some(2)), Err(Error::NoRootInSector(2)));
    }
}
