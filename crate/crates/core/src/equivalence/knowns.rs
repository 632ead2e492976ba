use crate::error::{Error, Result};
use crate::model::{BoundaryForm, SingularityOrders};
use crate::model::json::complex_vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Combinations of `L_U` entries that must accompany the Weyl matrix in the
/// finite-interval inverse problem; `vectors[nu]` has length `i_nu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownBoundaryData {
    pub vectors: Vec<Known>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Known(#[serde(with = "complex_vec")] pub Vec<Complex64>);

/// `L_{2k} = (l_{n-s,k+1} + l_{n-k,s+1})_{s=k..k+i-1}` and
/// `L_{2k+1} = (l_{n-s,k+1} - l_{n-k,s+1})_{s=k+1..k+i}`.
pub fn knowns_vectors(u: &BoundaryForm, orders: &SingularityOrders) -> Result<KnownBoundaryData> {
    let n = orders.n();
    if u.n() != n {
        return Err(Error::ShapeMismatch(format!("U has size {}, orders are for n = {n}", u.n())));
    }
    let vectors = orders
        .orders()
        .iter()
        .enumerate()
        .map(|(nu, &i)| {
            let k = nu / 2;
            Known(if nu % 2 == 0 {
                (k..k + i).map(|s| u.l(n - s, k + 1) + u.l(n - k, s + 1)).collect()
            } else {
                (k + 1..=k + i).map(|s| u.l(n - s, k + 1) - u.l(n - k, s + 1)).collect()
            })
        })
        .collect();
    Ok(KnownBoundaryData { vectors })
}

/// Entries `l_{r,c}` (1-based) of `L_U` required for the fourth-order
/// finite-interval inverse problem with orders `(i0, 0, i2)`.
pub fn required_knowns(i0: usize, i2: usize) -> Result<Vec<(usize, usize)>> {
    Ok(match (i0, i2) {
        (0, 0) => vec![],
        (1, 0) => vec![(4, 1)],
        (2, 0) => vec![(3, 1), (4, 1)],
        (0, 1) => vec![(3, 2)],
        (1, 1) => vec![(3, 2), (4, 1)],
        (2, 1) => vec![(3, 1), (3, 2), (4, 1)],
        _ => return Err(Error::InvalidCase(format!("no fourth-order problem with (i0, i2) = ({i0}, {i2})"))),
    })
}
