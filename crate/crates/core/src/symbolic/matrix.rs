use super::polynomial::RationalPolynomial;
use super::sigma::{CompiledExpression, SigmaExpression};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Index, IndexMut};

/// Dense matrix of [`SigmaExpression`] entries, indexed from zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolicMatrix {
    rows: Vec<Vec<SigmaExpression>>,
}

impl SymbolicMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![vec![SigmaExpression::zero(); cols]; rows],
        }
    }

    pub fn from_rows(rows: Vec<Vec<SigmaExpression>>) -> Self {
        Self { rows }
    }

    /// Builds a matrix from rendered entries; panics on malformed text, so it
    /// is meant for literals.
    pub fn parse_rows(rows: &[&[&str]]) -> Self {
        Self {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|t| t.parse().expect("bad expression literal")).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_square(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.nrows())
    }

    pub fn rows(&self) -> &[Vec<SigmaExpression>] {
        &self.rows
    }

    pub fn trace(&self) -> SigmaExpression {
        (0..self.nrows().min(self.ncols())).fold(SigmaExpression::zero(), |acc, i| &acc + &self.rows[i][i])
    }

    pub fn map(&self, f: impl Fn(&SigmaExpression) -> SigmaExpression) -> Self {
        Self {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn zero_symbols(&self, symbols: &[usize]) -> Self {
        self.map(|e| e.zero_symbols(symbols))
    }

    pub fn substitute(&self, sigma: &[RationalPolynomial]) -> Vec<Vec<RationalPolynomial>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.substitute(sigma)).collect())
            .collect()
    }

    pub fn compile(&self) -> Vec<Vec<CompiledExpression>> {
        self.rows.iter().map(|r| r.iter().map(SigmaExpression::compile).collect()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }

    /// LaTeX `pmatrix` rendering with `\sigma_i` symbols.
    pub fn to_latex(&self) -> String {
        let body: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| latexify(&e.to_string()))
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", body.join(" \\\\\n"))
    }
}

fn latexify(text: &str) -> String {
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            's' => {
                out.push_str("\\sigma_{");
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    out.push(*d);
                    chars.next();
                }
                out.push('}');
            }
            '*' => out.push(' '),
            '^' => {
                out.push_str("^{");
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    out.push(*d);
                    chars.next();
                }
                out.push('}');
            }
            _ => out.push(c),
        }
    }
    out
}

impl Index<(usize, usize)> for SymbolicMatrix {
    type Output = SigmaExpression;
    fn index(&self, (r, c): (usize, usize)) -> &SigmaExpression {
        &self.rows[r][c]
    }
}

impl IndexMut<(usize, usize)> for SymbolicMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut SigmaExpression {
        &mut self.rows[r][c]
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
