use crate::symbolic::{SigmaExpression, SymbolicMatrix};
use serde::Serialize;

/// Outcome of checking conditions (i)-(iii) and the trace of an associated matrix.
/// Failure lists hold 1-based `(k, j)` positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub condition_i: Vec<(usize, usize)>,
    pub condition_ii: Vec<(usize, usize)>,
    pub condition_iii: Vec<(usize, usize)>,
    pub trace: SigmaExpression,
}

impl StructureReport {
    pub fn conditions_hold(&self) -> bool {
        self.condition_i.is_empty() && self.condition_ii.is_empty() && self.condition_iii.is_empty()
    }

    pub fn trace_zero(&self) -> bool {
        self.trace.is_zero()
    }

    pub fn passes(&self) -> bool {
        self.conditions_hold() && self.trace_zero()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for (name, list) in [("(i)", &self.condition_i), ("(ii)", &self.condition_ii), ("(iii)", &self.condition_iii)] {
            if !list.is_empty() {
                parts.push(format!("{name} fails at {list:?}"));
            }
        }
        if !self.trace_zero() {
            parts.push(format!("trace = {}", self.trace));
        }
        if parts.is_empty() {
            "all conditions hold".into()
        } else {
            parts.join("; ")
        }
    }
}

pub fn check_structure(f: &SymbolicMatrix) -> StructureReport {
    let n = f.nrows();
    let m = n / 2;
    let tau = n % 2;
    let mut report = StructureReport {
        n,
        condition_i: Vec::new(),
        condition_ii: Vec::new(),
        condition_iii: Vec::new(),
        trace: f.trace(),
    };
    for k in 1..=n {
        for j in 1..=n {
            let v = &f[(k - 1, j - 1)];
            if k + 1 < j && !v.is_zero() {
                report.condition_i.push((k, j));
            }
            if j == k + 1 && !v.is_one() {
                report.condition_ii.push((k, j));
            }
            let forced = (k + 1 <= m + tau && j <= k) || (j >= m + 2 && k >= j);
            if forced && !v.is_zero() {
                report.condition_iii.push((k, j));
            }
        }
    }
    report
}
