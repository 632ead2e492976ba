use crate::error::{Error, Result};
use crate::symbolic::rational::binomial;
use serde::Serialize;

/// Integer weight matrix `chi_{nu,i}` of size `(m+1) x (m+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiMatrix {
    pub nu: usize,
    pub i: usize,
    pub m: usize,
    pub entries: Vec<Vec<i64>>,
}

impl ChiMatrix {
    /// Nonzero entries as `(row, col, value)`.
    pub fn nonzeros(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.push((r, c, v));
                }
            }
        }
        out
    }
}

fn binom(n: usize, k: isize) -> i64 {
    if k < 0 {
        0
    } else {
        binomial(n, k as usize)
    }
}

pub fn chi_matrix(nu: usize, i: usize, m: usize) -> Result<ChiMatrix> {
    if m == 0 || nu > 2 * m - 1 {
        return Err(Error::IndexOutOfRange(format!("nu = {nu} for m = {m}")));
    }
    let k = nu / 2;
    let bound = if nu % 2 == 0 { m - k } else { (m - k).saturating_sub(1) };
    if i > bound {
        return Err(Error::IndexOutOfRange(format!("i = {i} exceeds {bound} for nu = {nu}")));
    }
    let mut entries = vec![vec![0i64; m + 1]; m + 1];
    if nu % 2 == 0 {
        for s in 0..=i {
            entries[s + k][i - s + k] = binom(i, s as isize);
        }
    } else {
        for s in 0..=i + 1 {
            entries[s + k][i + 1 - s + k] = binom(i + 1, s as isize) - 2 * binom(i, s as isize - 1);
        }
    }
    Ok(ChiMatrix { nu, i, m, entries })
}
