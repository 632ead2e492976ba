//! Multivariate polynomials in the coefficient symbols `s0, s1, ...`.

use super::polynomial::RationalPolynomial;
use super::rational::{self, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Exponent vector indexed by symbol; trailing zeros are trimmed so that
/// equal monomials compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn symbol(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, e) in self.factors() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "s{i}")?;
            } else {
                write!(f, "s{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sum of rational multiples of monomials in canonical (sorted, merged,
/// zero-free) form, so structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SigmaExpression {
    terms: BTreeMap<Monomial, Rational>,
}

impl SigmaExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rational::int(c))
    }

    /// The symbol `s{index}`.
    pub fn symbol(index: usize) -> Self {
        Self::term(Rational::one(), Monomial::symbol(index))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest symbol index that occurs, if any.
    pub fn max_symbol(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.0.len().checked_sub(1)).max()
    }

    /// Symbol indices that occur in at least one term.
    pub fn symbols(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(i, _)| i).collect::<Vec<_>>())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Replaces every occurrence of the listed symbols by zero.
    pub fn zero_symbols(&self, symbols: &[usize]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.factors().any(|(i, _)| symbols.contains(&i)) {
                continue;
            }
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Substitutes a polynomial in `x` for each symbol. Missing symbols are
    /// treated as zero.
    pub fn substitute(&self, sigma: &[RationalPolynomial]) -> RationalPolynomial {
        let zero = RationalPolynomial::zero();
        let mut out = RationalPolynomial::zero();
        for (m, c) in &self.terms {
            let mut p = RationalPolynomial::constant(c.clone());
            for (i, e) in m.factors() {
                p = &p * &sigma.get(i).unwrap_or(&zero).pow(e);
            }
            out = &out + &p;
        }
        out
    }

    pub fn evaluate(&self, values: &[Rational]) -> Rational {
        let zero = Rational::zero();
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let v = m.factors().fold(c.clone(), |p, (i, e)| {
                p * num_traits::pow(values.get(i).unwrap_or(&zero).clone(), e as usize)
            });
            acc + v
        })
    }

    pub fn compile(&self) -> CompiledExpression {
        CompiledExpression {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (rational::to_f64(c), m.factors().collect()))
                .collect(),
        }
    }
}

/// Floating-point form of a [`SigmaExpression`] for repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct CompiledExpression {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledExpression {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| {
                fs.iter().fold(*c, |p, &(i, e)| p * values.get(i).copied().unwrap_or(0.0).powi(e as i32))
            })
            .sum()
    }
}

impl fmt::Display for SigmaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = rational::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (idx == 0, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if m.is_one() {
                f.write_str(&rational::render(&abs))?;
            } else if rational::is_one(&abs) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{}", rational::render(&abs), m)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseSigmaError(pub String);

impl fmt::Display for ParseSigmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse expression: {}", self.0)
    }
}

impl std::error::Error for ParseSigmaError {}

impl FromStr for SigmaExpression {
    type Err = ParseSigmaError;

    /// Parses the rendering produced by `Display`, e.g. `"2*s0 - s2^2"`.
    /// Whitespace is ignored and `σ` may be used in place of `s`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseSigmaError(text.to_string());
        let compact: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'σ' { 's' } else { c })
            .collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = Self::zero();
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            let after_exp = compact[..i].ends_with(['e', 'E']);
            if (ch == '+' || ch == '-') && i > 0 && !after_exp {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            if body.is_empty() {
                return Err(err());
            }
            let mut coeff = Rational::one();
            let mut exps: Vec<u32> = Vec::new();
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('s') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| err())?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err())?;
                    if exps.len() <= idx {
                        exps.resize(idx + 1, 0);
                    }
                    exps[idx] += exp;
                } else {
                    coeff *= rational::parse(factor).ok_or_else(err)?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

impl Add for &SigmaExpression {
    type Output = SigmaExpression;
    fn add(self, rhs: &SigmaExpression) -> SigmaExpression {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SigmaExpression {
    type Output = SigmaExpression;
    fn sub(self, rhs: &SigmaExpression) -> SigmaExpression {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &SigmaExpression {
    type Output = SigmaExpression;
    fn mul(self, rhs: &SigmaExpression) -> SigmaExpression {
        let mut out = SigmaExpression::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SigmaExpression {
    type Output = SigmaExpression;
    fn neg(self) -> SigmaExpression {
        SigmaExpression {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for SigmaExpression {
            type Output = SigmaExpression;
            fn $method(self, rhs: SigmaExpression) -> SigmaExpression {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&SigmaExpression> for SigmaExpression {
            type Output = SigmaExpression;
            fn $method(self, rhs: &SigmaExpression) -> SigmaExpression {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SigmaExpression {
    type Output = SigmaExpression;
    fn neg(self) -> SigmaExpression {
        -&self
    }
}

impl serde::Serialize for SigmaExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for SigmaExpression {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
