use crate::error::Result;
use crate::model::CoefficientFunction;
use crate::regularize::FEvaluator;
use crate::symbolic::SymbolicMatrix;

/// Potential `q = a' + a^2 + b` of the second-order equation generated by
/// `F = [[a, 1], [b, -a]]`.
pub fn potential_from_f2(a: &CoefficientFunction, b: &CoefficientFunction) -> Result<CoefficientFunction> {
    Ok(a.derivative()?.add(&a.mul(a)).add(b))
}

/// The general two-by-two associated matrix `[[a, 1], [b, -a]]` as an evaluator.
pub fn f2_system(a: CoefficientFunction, b: CoefficientFunction) -> Result<FEvaluator> {
    FEvaluator::new(SymbolicMatrix::parse_rows(&[&["s0", "1"], &["s1", "-s0"]]), vec![a, b])
}

/// `(a, b) = (0, 0)` and `(a, -(a' + a^2))`: different matrices with the same
/// potential, hence the same Weyl function when `a(0) = 0`.
pub fn counterexample_pair(a: &CoefficientFunction) -> Result<(FEvaluator, FEvaluator)> {
    let b = a.derivative()?.add(&a.mul(a)).neg();
    Ok((
        f2_system(CoefficientFunction::zero(), CoefficientFunction::zero())?,
        f2_system(a.clone(), b)?,
    ))
}
