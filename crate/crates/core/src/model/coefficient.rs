use super::orders::SingularityOrders;
use crate::error::{Error, Result};
use crate::symbolic::rational::{self, Exact, Rational};
use crate::symbolic::RationalPolynomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Which one-sided limit to take at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpProfile {
    #[default]
    Indicator,
    Hat,
    /// `16 t^2 (1 - t)^2` on the support, continuously differentiable.
    Smooth,
}

/// A real coefficient on `[0, inf)`, piecewise polynomial with exact rational
/// breakpoints. Piece `i` covers `[b_i, b_{i+1})` in the local variable
/// `t = x - b_i`; the last piece extends to infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientSpec", into = "CoefficientSpec")]
pub struct CoefficientFunction {
    breaks: Vec<Rational>,
    pieces: Vec<RationalPolynomial>,
    fbreaks: Vec<f64>,
    fpieces: Vec<Vec<f64>>,
}

impl CoefficientFunction {
    pub fn zero() -> Self {
        Self::polynomial(RationalPolynomial::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(RationalPolynomial::constant(c))
    }

    pub fn polynomial(p: RationalPolynomial) -> Self {
        Self::build(vec![Rational::zero()], vec![p])
    }

    pub fn piecewise(breaks: Vec<Rational>, pieces: Vec<RationalPolynomial>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != pieces.len() {
            return Err(Error::InvalidCoefficient(format!(
                "{} breaks for {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        if !breaks[0].is_zero() {
            return Err(Error::InvalidCoefficient("first breakpoint must be 0".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCoefficient("breakpoints must increase strictly".into()));
        }
        Ok(Self::build(breaks, pieces))
    }

    /// `height * profile` on `[a, b]`, zero elsewhere.
    pub fn bump(a: Rational, b: Rational, height: Rational, profile: BumpProfile) -> Result<Self> {
        if a < Rational::zero() || a >= b {
            return Err(Error::InvalidCoefficient("bump support must satisfy 0 <= a < b".into()));
        }
        let w = &b - &a;
        let shape = match profile {
            BumpProfile::Indicator => RationalPolynomial::constant(height),
            BumpProfile::Hat => {
                return Self::piecewise_linear(
                    &[a.clone(), (&a + &b) / rational::int(2), b],
                    &[Rational::zero(), height, Rational::zero()],
                );
            }
            BumpProfile::Smooth => {
                // 16 t^2 (w - t)^2 / w^4
                let t = RationalPolynomial::x();
                let rest = RationalPolynomial::new(vec![w.clone(), -Rational::one()]);
                let c = height * rational::int(16) / num_traits::pow(w.clone(), 4);
                (&t.pow(2) * &rest.pow(2)).scale(&c)
            }
        };
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        if !a.is_zero() {
            breaks.push(Rational::zero());
            pieces.push(RationalPolynomial::zero());
        }
        breaks.extend([a, b]);
        pieces.extend([shape, RationalPolynomial::zero()]);
        Self::piecewise(breaks, pieces)
    }

    /// Linear interpolation through `(x_i, y_i)`, zero outside `[x_0, x_last]`.
    pub fn piecewise_linear(xs: &[Rational], ys: &[Rational]) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidCoefficient("piecewise_linear needs matching x, y of length >= 2".into()));
        }
        if xs[0] < Rational::zero() || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCoefficient("piecewise_linear abscissae must be >= 0 and increasing".into()));
        }
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        if !xs[0].is_zero() {
            breaks.push(Rational::zero());
            pieces.push(RationalPolynomial::zero());
        }
        for i in 0..xs.len() - 1 {
            let slope = (&ys[i + 1] - &ys[i]) / (&xs[i + 1] - &xs[i]);
            breaks.push(xs[i].clone());
            pieces.push(RationalPolynomial::new(vec![ys[i].clone(), slope]));
        }
        breaks.push(xs[xs.len() - 1].clone());
        pieces.push(RationalPolynomial::zero());
        Self::piecewise(breaks, pieces)
    }

    fn build(breaks: Vec<Rational>, pieces: Vec<RationalPolynomial>) -> Self {
        let mut b: Vec<Rational> = Vec::with_capacity(breaks.len());
        let mut p: Vec<RationalPolynomial> = Vec::with_capacity(pieces.len());
        for (bi, pi) in breaks.into_iter().zip(pieces) {
            if let (Some(lb), Some(lp)) = (b.last(), p.last()) {
                if lp.shift(&(&bi - lb)) == pi {
                    continue;
                }
            }
            b.push(bi);
            p.push(pi);
        }
        let fbreaks = b.iter().map(rational::to_f64).collect();
        let fpieces = p.iter().map(RationalPolynomial::to_f64_coeffs).collect();
        Self { breaks: b, pieces: p, fbreaks, fpieces }
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[RationalPolynomial] {
        &self.pieces
    }

    /// Interior breakpoints as floats (excluding 0).
    pub fn breakpoints_f64(&self) -> &[f64] {
        &self.fbreaks[1..]
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_zero()
    }

    pub fn as_polynomial(&self) -> Option<&RationalPolynomial> {
        (self.pieces.len() == 1).then(|| &self.pieces[0])
    }

    fn segment_f64(&self, x: f64, side: Side) -> usize {
        let pos = match side {
            Side::Right => self.fbreaks.partition_point(|&b| b <= x),
            Side::Left => self.fbreaks.partition_point(|&b| b < x),
        };
        pos.saturating_sub(1)
    }

    fn segment(&self, x: &Rational, side: Side) -> usize {
        let pos = match side {
            Side::Right => self.breaks.partition_point(|b| b <= x),
            Side::Left => self.breaks.partition_point(|b| b < x),
        };
        pos.saturating_sub(1)
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_side(x, Side::Right)
    }

    pub fn eval_side(&self, x: f64, side: Side) -> f64 {
        let i = self.segment_f64(x, side);
        let t = x - self.fbreaks[i];
        self.fpieces[i].iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn value_at(&self, x: &Rational, side: Side) -> Rational {
        let i = self.segment(x, side);
        self.pieces[i].eval(&(x - &self.breaks[i]))
    }

    pub fn is_continuous_at(&self, x: &Rational) -> bool {
        x.is_zero() || self.value_at(x, Side::Left) == self.value_at(x, Side::Right)
    }

    /// Absolutely (and square) integrable on the half-line: the last piece vanishes.
    pub fn is_integrable(&self) -> bool {
        self.pieces.last().is_some_and(RationalPolynomial::is_zero)
    }

    /// Right end of the support, or `None` if the support is unbounded.
    pub fn support_end(&self) -> Option<Rational> {
        if !self.is_integrable() {
            return None;
        }
        Some(if self.pieces.len() == 1 { Rational::zero() } else { self.breaks[self.breaks.len() - 1].clone() })
    }

    fn merged(&self, other: &Self, op: impl Fn(&RationalPolynomial, &RationalPolynomial) -> RationalPolynomial) -> Self {
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let pieces = breaks
            .iter()
            .map(|c| op(&self.local_at(c), &other.local_at(c)))
            .collect();
        Self::build(breaks, pieces)
    }

    /// The piece active just right of `c`, re-expressed in `t = x - c`.
    fn local_at(&self, c: &Rational) -> RationalPolynomial {
        let i = self.segment(c, Side::Right);
        self.pieces[i].shift(&(c - &self.breaks[i]))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merged(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merged(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merged(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::build(self.breaks.clone(), self.pieces.iter().map(|p| p.scale(c)).collect())
    }

    pub fn add_constant(&self, c: &Rational) -> Self {
        self.add(&Self::constant(c.clone()))
    }

    /// Derivative, defined when the function has no jumps.
    pub fn derivative(&self) -> Result<Self> {
        for b in &self.breaks[1..] {
            if !self.is_continuous_at(b) {
                return Err(Error::NonDifferentiableKind(format!(
                    "jump at x = {}",
                    rational::render(b)
                )));
            }
        }
        Ok(Self::build(self.breaks.clone(), self.pieces.iter().map(RationalPolynomial::derivative).collect()))
    }

    /// `x -> int_0^x f`.
    pub fn cumulative_integral(&self) -> Self {
        let mut acc = Rational::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            pieces.push(&anti + &RationalPolynomial::constant(acc.clone()));
            if let Some(next) = self.breaks.get(i + 1) {
                acc += anti.eval(&(next - &self.breaks[i]));
            }
        }
        Self::build(self.breaks.clone(), pieces)
    }

    pub fn integral_to(&self, x: &Rational) -> Rational {
        self.cumulative_integral().value_at(x, Side::Right)
    }

    /// `int_0^inf f`; requires compact support.
    pub fn total_integral(&self) -> Result<Rational> {
        match self.support_end() {
            Some(end) => Ok(self.integral_to(&end)),
            None => Err(Error::NonIntegrableTail),
        }
    }

    /// `x -> int_x^inf f`.
    pub fn tail_integral(&self) -> Result<Self> {
        let total = self.total_integral()?;
        Ok(self.cumulative_integral().neg().add_constant(&total))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().filter_map(RationalPolynomial::degree).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
enum CoefficientSpec {
    Zero,
    Constant {
        value: Exact,
    },
    Polynomial {
        coefficients: Vec<Exact>,
    },
    PiecewiseLinear {
        x: Vec<Exact>,
        y: Vec<Exact>,
    },
    Bump {
        support: [Exact; 2],
        height: Exact,
        #[serde(default)]
        profile: BumpProfile,
    },
    Piecewise {
        breaks: Vec<Exact>,
        pieces: Vec<Vec<Exact>>,
    },
}

fn unwrap_all(v: Vec<Exact>) -> Vec<Rational> {
    v.into_iter().map(|e| e.0).collect()
}

impl TryFrom<CoefficientSpec> for CoefficientFunction {
    type Error = Error;
    fn try_from(spec: CoefficientSpec) -> Result<Self> {
        match spec {
            CoefficientSpec::Zero => Ok(Self::zero()),
            CoefficientSpec::Constant { value } => Ok(Self::constant(value.0)),
            CoefficientSpec::Polynomial { coefficients } => {
                Ok(Self::polynomial(RationalPolynomial::new(unwrap_all(coefficients))))
            }
            CoefficientSpec::PiecewiseLinear { x, y } => Self::piecewise_linear(&unwrap_all(x), &unwrap_all(y)),
            CoefficientSpec::Bump { support: [a, b], height, profile } => Self::bump(a.0, b.0, height.0, profile),
            CoefficientSpec::Piecewise { breaks, pieces } => Self::piecewise(
                unwrap_all(breaks),
                pieces.into_iter().map(|p| RationalPolynomial::new(unwrap_all(p))).collect(),
            ),
        }
    }
}

impl From<CoefficientFunction> for CoefficientSpec {
    fn from(f: CoefficientFunction) -> Self {
        let wrap = |p: &RationalPolynomial| p.coeffs().iter().cloned().map(Exact).collect::<Vec<_>>();
        if let Some(p) = f.as_polynomial() {
            return CoefficientSpec::Polynomial { coefficients: wrap(p) };
        }
        CoefficientSpec::Piecewise {
            breaks: f.breaks.iter().cloned().map(Exact).collect(),
            pieces: f.pieces.iter().map(wrap).collect(),
        }
    }
}

/// Coefficients `sigma_0, ..., sigma_{n-2}` paired with their singularity orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct CoefficientSet {
    orders: SingularityOrders,
    sigma: Vec<CoefficientFunction>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    n: usize,
    orders: Vec<usize>,
    sigma: Vec<CoefficientFunction>,
}

impl TryFrom<RawSet> for CoefficientSet {
    type Error = Error;
    fn try_from(raw: RawSet) -> Result<Self> {
        let orders = super::orders::validate_orders(raw.n, &raw.orders)?;
        CoefficientSet::new(orders, raw.sigma)
    }
}

impl From<CoefficientSet> for RawSet {
    fn from(s: CoefficientSet) -> Self {
        RawSet { n: s.orders.n(), orders: s.orders.orders().to_vec(), sigma: s.sigma }
    }
}

impl CoefficientSet {
    pub fn new(orders: SingularityOrders, sigma: Vec<CoefficientFunction>) -> Result<Self> {
        if sigma.len() != orders.n() - 1 {
            return Err(Error::LengthMismatch { expected: orders.n() - 1, actual: sigma.len() });
        }
        Ok(Self { orders, sigma })
    }

    pub fn zero(orders: SingularityOrders) -> Self {
        let sigma = vec![CoefficientFunction::zero(); orders.n() - 1];
        Self { orders, sigma }
    }

    pub fn orders(&self) -> &SingularityOrders {
        &self.orders
    }

    pub fn n(&self) -> usize {
        self.orders.n()
    }

    pub fn sigma(&self) -> &[CoefficientFunction] {
        &self.sigma
    }

    pub fn sigma_at(&self, nu: usize) -> &CoefficientFunction {
        &self.sigma[nu]
    }

    pub fn with_sigma(&self, nu: usize, f: CoefficientFunction) -> Self {
        let mut out = self.clone();
        out.sigma[nu] = f;
        out
    }

    pub fn with_orders(&self, orders: SingularityOrders) -> Result<Self> {
        Self::new(orders, self.sigma.clone())
    }

    /// Exact polynomial coefficients, when every `sigma_nu` is a single polynomial.
    pub fn polynomials(&self) -> Result<Vec<RationalPolynomial>> {
        self.sigma
            .iter()
            .map(|s| s.as_polynomial().cloned().ok_or(Error::NonPolynomialCoefficient))
            .collect()
    }

    /// Sorted union of interior breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.sigma.iter().flat_map(|s| s.breakpoints_f64().iter().copied()).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Integrability on the half-line for every coefficient (class `Sigma_I`
    /// rather than its local version).
    pub fn is_integrable(&self) -> bool {
        self.sigma.iter().all(CoefficientFunction::is_integrable)
    }

    /// End of the joint support, `None` if some coefficient has unbounded support.
    pub fn support_end(&self) -> Option<Rational> {
        self.sigma.iter().map(CoefficientFunction::support_end).try_fold(Rational::zero(), |acc, e| {
            e.map(|e| if e > acc { e } else { acc })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rational::{int, ratio};

    fn indicator(a: i64, b: i64) -> CoefficientFunction {
        CoefficientFunction::bump(int(a), int(b), int(1), BumpProfile::Indicator).unwrap()
    }

    #[test]
    fn indicator_evaluation_and_limits() {
        let f = indicator(0, 1);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval_side(1.0, Side::Left), 1.0);
        assert_eq!(f.eval(3.0), 0.0);
        assert!(!f.is_continuous_at(&int(1)));
        assert!(f.derivative().is_err());
        assert_eq!(f.support_end(), Some(int(1)));
    }

    #[test]
    fn tail_integral_of_indicator() {
        let f = indicator(0, 1);
        let g = f.tail_integral().unwrap();
        // max(0, 1 - x)
        for (x, v) in [(0.0, 1.0), (0.25, 0.75), (1.0, 0.0), (2.0, 0.0)] {
            assert!((g.eval(x) - v).abs() < 1e-15);
        }
        assert_eq!(g.derivative().unwrap().neg(), f);
        assert_eq!(f.total_integral().unwrap(), int(1));
    }

    #[test]
    fn polynomials_are_not_integrable() {
        let f = CoefficientFunction::polynomial(RationalPolynomial::x());
        assert!(!f.is_integrable());
        assert_eq!(f.total_integral(), Err(Error::NonIntegrableTail));
        assert!(CoefficientFunction::zero().is_integrable());
    }

    #[test]
    fn arithmetic_merges_breaks() {
        let f = indicator(0, 2);
        let g = indicator(1, 3);
        let s = f.add(&g);
        assert_eq!(s.eval(0.5), 1.0);
        assert_eq!(s.eval(1.5), 2.0);
        assert_eq!(s.eval(2.5), 1.0);
        assert_eq!(s.sub(&g), f);
        assert_eq!(f.mul(&g), indicator(1, 2));
    }

    #[test]
    fn smooth_bump_is_c1() {
        let f = CoefficientFunction::bump(ratio(1, 4), ratio(3, 4), int(2), BumpProfile::Smooth).unwrap();
        assert!((f.eval(0.5) - 2.0).abs() < 1e-14);
        let d = f.derivative().unwrap();
        assert!(d.derivative().is_ok());
        assert_eq!(d.value_at(&ratio(1, 4), Side::Left), int(0));
        assert_eq!(d.value_at(&ratio(3, 4), Side::Right), int(0));
    }

    #[test]
    fn hat_and_linear() {
        let f = CoefficientFunction::bump(int(0), int(2), int(4), BumpProfile::Hat).unwrap();
        assert_eq!(f.eval(1.0), 4.0);
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.total_integral().unwrap(), int(4));
    }

    #[test]
    fn json_kinds() {
        let f: CoefficientFunction =
            serde_json::from_str(r#"{"kind":"bump","params":{"support":[0,1],"height":"1/2"}}"#).unwrap();
        assert_eq!(f.eval(0.5), 0.5);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"kind":"piecewise","params":{"breaks":["0","1"],"pieces":[["1/2"],[]]}}"#);
        let back: CoefficientFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let p: CoefficientFunction =
            serde_json::from_str(r#"{"kind":"polynomial","params":{"coefficients":[1,0,"-3"]}}"#).unwrap();
        assert_eq!(p.eval(2.0), -11.0);
        let z: CoefficientFunction = serde_json::from_str(r#"{"kind":"zero"}"#).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn set_validation() {
        let o = crate::model::validate_orders(3, &[1, 0]).unwrap();
        assert!(CoefficientSet::new(o.clone(), vec![CoefficientFunction::zero()]).is_err());
        let s = CoefficientSet::new(o, vec![indicator(0, 1), indicator(0, 2)]).unwrap();
        assert_eq!(s.support_end(), Some(int(2)));
        assert_eq!(s.breakpoints(), vec![1.0, 2.0]);
        assert_eq!(s.polynomials(), Err(Error::NonPolynomialCoefficient));
    }
}
