use super::smap::build_f_symbolic;
use crate::error::{Error, Result};
use crate::model::{CoefficientFunction, CoefficientSet, Side};
use crate::symbolic::{CompiledExpression, SymbolicMatrix};
use nalgebra::DMatrix;

/// A symbolic associated matrix together with concrete functions for its
/// symbols, evaluated pointwise as a dense real matrix.
#[derive(Clone, Debug)]
pub struct FEvaluator {
    symbolic: SymbolicMatrix,
    sigma: Vec<CoefficientFunction>,
    compiled: Vec<Vec<CompiledExpression>>,
    breakpoints: Vec<f64>,
}

impl FEvaluator {
    /// Pairs an arbitrary square symbolic matrix with values for `s0, s1, ...`.
    pub fn new(symbolic: SymbolicMatrix, sigma: Vec<CoefficientFunction>) -> Result<Self> {
        if !symbolic.is_square() || symbolic.nrows() < 2 {
            return Err(Error::ShapeMismatch("F must be square of size >= 2".into()));
        }
        let needed = symbolic
            .rows()
            .iter()
            .flatten()
            .filter_map(|e| e.max_symbol())
            .max()
            .map_or(0, |s| s + 1);
        if sigma.len() < needed {
            return Err(Error::LengthMismatch { expected: needed, actual: sigma.len() });
        }
        let mut breakpoints: Vec<f64> = sigma.iter().flat_map(|s| s.breakpoints_f64().iter().copied()).collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(Self { compiled: symbolic.compile(), symbolic, sigma, breakpoints })
    }

    /// `F = S_n(Q_I(Sigma))` for a coefficient set.
    pub fn from_coefficients(coeffs: &CoefficientSet) -> Self {
        Self::new(build_f_symbolic(coeffs.orders()), coeffs.sigma().to_vec())
            .expect("associated matrix matches its coefficient set")
    }

    pub fn n(&self) -> usize {
        self.symbolic.nrows()
    }

    pub fn symbolic(&self) -> &SymbolicMatrix {
        &self.symbolic
    }

    pub fn sigma(&self) -> &[CoefficientFunction] {
        &self.sigma
    }

    /// Interior points where some coefficient changes piece.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Whether every coefficient has bounded support.
    pub fn is_integrable(&self) -> bool {
        self.sigma.iter().all(CoefficientFunction::is_integrable)
    }

    pub fn support_end(&self) -> Option<f64> {
        self.sigma
            .iter()
            .map(|s| s.support_end().map(|r| crate::symbolic::rational::to_f64(&r)))
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
    }

    pub fn eval_into(&self, x: f64, side: Side, values: &mut Vec<f64>, out: &mut DMatrix<f64>) {
        values.clear();
        values.extend(self.sigma.iter().map(|s| s.eval_side(x, side)));
        for (r, row) in self.compiled.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                out[(r, c)] = e.eval(values);
            }
        }
    }

    pub fn eval(&self, x: f64, side: Side) -> Result<DMatrix<f64>> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::DomainViolation(x));
        }
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        self.eval_into(x, side, &mut Vec::new(), &mut out);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_orders;
    use crate::symbolic::RationalPolynomial;

    #[test]
    fn n2_polynomial_substitution() {
        let o = validate_orders(2, &[1]).unwrap();
        let c = CoefficientSet::new(o, vec![CoefficientFunction::polynomial(RationalPolynomial::x())]).unwrap();
        let f = FEvaluator::from_coefficients(&c).eval(2.0, Side::Right).unwrap();
        assert_eq!(f, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, -4.0, -2.0]));
    }

    #[test]
    fn rejects_negative_points() {
        let c = CoefficientSet::zero(validate_orders(2, &[0]).unwrap());
        assert_eq!(
            FEvaluator::from_coefficients(&c).eval(-1.0, Side::Right),
            Err(Error::DomainViolation(-1.0))
        );
    }
}
