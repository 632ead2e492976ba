//! Construction of the weight matrices `chi`, the quadratic-form matrix `Q`,
//! the associated matrix `F` and its inverse map, plus structure checks.

mod chi;
mod eval;
mod smap;
mod structure;

pub use chi::{chi_matrix, ChiMatrix};
pub use eval::FEvaluator;
pub use smap::{build_f_symbolic, build_q, s_inverse, s_map};
pub use structure::{check_structure, StructureReport};

use crate::model::CoefficientSet;
use crate::symbolic::SymbolicMatrix;

pub type QMatrix = SymbolicMatrix;
pub type FMatrix = SymbolicMatrix;

/// Symbolic `F` for the coefficient set and its pointwise evaluator.
pub fn build_f(coeffs: &CoefficientSet) -> (FMatrix, FEvaluator) {
    let eval = FEvaluator::from_coefficients(coeffs);
    (eval.symbolic().clone(), eval)
}
