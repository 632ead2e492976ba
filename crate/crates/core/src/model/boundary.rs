use super::json::{complex_matrix, C64};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Boundary forms `U = P L` at an endpoint: `U_s(y) = y^[p_s] + sum_{j<p_s} l_{p_s,j} y^[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawForm", into = "RawForm")]
pub struct BoundaryForm {
    permutation: Vec<usize>,
    lower: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    permutation: Vec<usize>,
    lower: Vec<Vec<C64>>,
}

impl TryFrom<RawForm> for BoundaryForm {
    type Error = Error;
    fn try_from(raw: RawForm) -> Result<Self> {
        let lower = complex_matrix::from_rows(&raw.lower)
            .ok_or_else(|| Error::ShapeMismatch("ragged rows in lower".into()))?;
        validate_boundary_form(raw.permutation, lower)
    }
}

impl From<BoundaryForm> for RawForm {
    fn from(b: BoundaryForm) -> Self {
        RawForm { lower: complex_matrix::to_rows(&b.lower), permutation: b.permutation }
    }
}

pub fn validate_boundary_form(permutation: Vec<usize>, lower: DMatrix<Complex64>) -> Result<BoundaryForm> {
    let n = permutation.len();
    let mut seen = vec![false; n];
    for &p in &permutation {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(permutation));
        }
    }
    if lower.nrows() != n || lower.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "lower is {}x{}, permutation has length {n}",
            lower.nrows(),
            lower.ncols()
        )));
    }
    for r in 0..n {
        if lower[(r, r)] != Complex64::new(1.0, 0.0) {
            return Err(Error::NotUnitLowerTriangular { row: r, col: r });
        }
        for c in r + 1..n {
            if lower[(r, c)] != Complex64::new(0.0, 0.0) {
                return Err(Error::NotUnitLowerTriangular { row: r, col: c });
            }
        }
    }
    Ok(BoundaryForm { permutation, lower })
}

impl BoundaryForm {
    pub fn identity(n: usize) -> Self {
        BoundaryForm { permutation: (0..n).collect(), lower: DMatrix::identity(n, n) }
    }

    /// Forms with the given permutation and `L = I`.
    pub fn from_permutation(permutation: Vec<usize>) -> Result<Self> {
        let n = permutation.len();
        validate_boundary_form(permutation, DMatrix::identity(n, n))
    }

    /// Builds `L` from the strictly lower entries listed as `(row, col, value)`
    /// with 1-based indices `row > col`.
    pub fn with_entries(permutation: Vec<usize>, entries: &[(usize, usize, Complex64)]) -> Result<Self> {
        let n = permutation.len();
        let mut lower = DMatrix::identity(n, n);
        for &(r, c, v) in entries {
            if r == 0 || c == 0 || r > n || c >= r {
                return Err(Error::IndexOutOfRange(format!("l_{{{r},{c}}} for n = {n}")));
            }
            lower[(r - 1, c - 1)] = v;
        }
        validate_boundary_form(permutation, lower)
    }

    pub fn n(&self) -> usize {
        self.permutation.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn lower(&self) -> &DMatrix<Complex64> {
        &self.lower
    }

    /// `l_{r,c}` with 1-based indices.
    pub fn l(&self, r: usize, c: usize) -> Complex64 {
        self.lower[(r - 1, c - 1)]
    }

    pub fn set_l(&mut self, r: usize, c: usize, v: Complex64) -> Result<()> {
        let n = self.n();
        if r == 0 || c == 0 || r > n || c >= r {
            return Err(Error::IndexOutOfRange(format!("l_{{{r},{c}}} for n = {n}")));
        }
        self.lower[(r - 1, c - 1)] = v;
        Ok(())
    }

    pub fn permutation_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut p = DMatrix::zeros(n, n);
        for (s, &ps) in self.permutation.iter().enumerate() {
            p[(s, ps)] = Complex64::new(1.0, 0.0);
        }
        p
    }

    /// The assembled matrix `U = P L`; row `s` holds the coefficients of `U_s`.
    pub fn dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n(), self.n(), |s, j| self.lower[(self.permutation[s], j)])
    }

    /// Exact inverse `L^{-1} P^T` by forward substitution.
    pub fn inverse(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let mut linv = DMatrix::<Complex64>::identity(n, n);
        for c in 0..n {
            for r in c + 1..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in c..r {
                    acc += self.lower[(r, k)] * linv[(k, c)];
                }
                linv[(r, c)] = -acc;
            }
        }
        let mut out = DMatrix::zeros(n, n);
        for (s, &ps) in self.permutation.iter().enumerate() {
            for r in 0..n {
                out[(r, s)] = linv[(r, ps)];
            }
        }
        out
    }

    /// Values `U_s(y)` for the vector of quasi-derivatives `y^[0..n-1]`.
    pub fn apply(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        self.dense() * y
    }

    /// Same permutation with `L` replaced by `L * T` for a unit lower-triangular `T`.
    pub fn right_multiplied(&self, t: &DMatrix<Complex64>) -> Result<Self> {
        let lower = &self.lower * t;
        validate_boundary_form(self.permutation.clone(), clean_unit_lower(lower))
    }
}

/// Forces exact zeros above the diagonal and exact ones on it after a
/// product of unit lower-triangular matrices.
fn clean_unit_lower(mut m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    for r in 0..m.nrows() {
        m[(r, r)] = Complex64::new(1.0, 0.0);
        for c in r + 1..m.ncols() {
            m[(r, c)] = Complex64::new(0.0, 0.0);
        }
    }
    m
}
