//! Exact arithmetic: rationals, univariate polynomials, and polynomials in
//! the coefficient symbols.

mod matrix;
mod polynomial;
pub mod rational;
mod sigma;

pub use matrix::SymbolicMatrix;
pub use polynomial::RationalPolynomial;
pub use rational::Rational;
pub use sigma::{CompiledExpression, Monomial, ParseSigmaError, SigmaExpression};
