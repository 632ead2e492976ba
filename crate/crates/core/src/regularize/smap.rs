use super::chi::chi_matrix;
use super::structure::check_structure;
use crate::error::{Error, Result};
use crate::model::SingularityOrders;
use crate::symbolic::rational;
use crate::symbolic::{SigmaExpression, SymbolicMatrix};

fn sign(e: usize) -> SigmaExpression {
    SigmaExpression::int(if e % 2 == 0 { 1 } else { -1 })
}

/// `Q = sum_nu s_nu chi_{nu, i_nu}` with the symbol `s_nu` standing for `sigma_nu`.
pub fn build_q(orders: &SingularityOrders) -> SymbolicMatrix {
    let m = orders.m();
    let mut q = SymbolicMatrix::zeros(m + 1, m + 1);
    for (nu, &i) in orders.orders().iter().enumerate() {
        let chi = chi_matrix(nu, i, m).expect("validated orders give valid chi indices");
        let s = SigmaExpression::symbol(nu);
        for (r, c, v) in chi.nonzeros() {
            q[(r, c)] = &q[(r, c)] + &s.scale(&rational::int(v));
        }
    }
    q
}

/// Maps `Q` to the associated matrix `F` (1-based formulas, 0-based storage).
pub fn s_map(q: &SymbolicMatrix, n: usize) -> Result<SymbolicMatrix> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let m = n / 2;
    if q.nrows() != m + 1 || !q.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "Q must be {}x{} for n = {n}, got {}x{}",
            m + 1,
            m + 1,
            q.nrows(),
            q.ncols()
        )));
    }
    let qq = |r: usize, c: usize| &q[(r, c)];
    let mut f: Vec<Vec<Option<SigmaExpression>>> = vec![vec![None; n]; n];
    let mut set = |k: usize, j: usize, v: SigmaExpression| {
        let slot = &mut f[k - 1][j - 1];
        assert!(slot.is_none(), "entry ({k},{j}) defined twice");
        *slot = Some(v);
    };
    if n % 2 == 0 {
        if !q[(m, m)].is_zero() {
            return Err(Error::StructureViolation("q_{m,m} must vanish for even n".into()));
        }
        for j in 1..=m {
            set(m, j, &sign(m + 1) * qq(j - 1, m));
        }
        for k in m + 1..=2 * m {
            set(k, m + 1, &sign(k + 1) * qq(m, 2 * m - k));
            for j in 1..=m {
                let lin = &sign(k + 1) * qq(j - 1, 2 * m - k);
                let quad = &sign(m + k) * &(qq(j - 1, m) * qq(m, 2 * m - k));
                set(k, j, &lin + &quad);
            }
        }
    } else {
        for k in m + 1..=2 * m + 1 {
            for j in 1..=m + 1 {
                set(k, j, &sign(k) * qq(j - 1, 2 * m + 1 - k));
            }
        }
    }
    let rows = f
        .into_iter()
        .enumerate()
        .map(|(r, row)| {
            row.into_iter()
                .enumerate()
                .map(|(c, v)| v.unwrap_or_else(|| completion(n, r + 1, c + 1)))
                .collect()
        })
        .collect();
    Ok(SymbolicMatrix::from_rows(rows))
}

/// Value forced on entry `(k, j)` by conditions (i), (ii), (iii), in that order.
fn completion(n: usize, k: usize, j: usize) -> SigmaExpression {
    let m = n / 2;
    let tau = n % 2;
    if k + 1 < j {
        SigmaExpression::zero()
    } else if j == k + 1 {
        SigmaExpression::one()
    } else if (k + 1 <= m + tau && j <= k) || (j >= m + 2 && k >= j) {
        SigmaExpression::zero()
    } else {
        panic!("entry ({k},{j}) of F is neither defined nor forced for n = {n}")
    }
}

/// Recovers `Q` from an associated matrix satisfying the structure conditions.
pub fn s_inverse(f: &SymbolicMatrix, n: usize) -> Result<SymbolicMatrix> {
    if f.nrows() != n || !f.is_square() {
        return Err(Error::ShapeMismatch(format!("F must be {n}x{n}")));
    }
    let report = check_structure(f);
    if !report.conditions_hold() {
        return Err(Error::StructureViolation(report.summary()));
    }
    let m = n / 2;
    let ff = |k: usize, j: usize| &f[(k - 1, j - 1)];
    let mut q = SymbolicMatrix::zeros(m + 1, m + 1);
    if n % 2 == 0 {
        for j in 1..=m {
            q[(j - 1, m)] = &sign(m + 1) * ff(m, j);
        }
        for k in m + 1..=2 * m {
            q[(m, 2 * m - k)] = &sign(k + 1) * ff(k, m + 1);
            for j in 1..=m {
                q[(j - 1, 2 * m - k)] = &sign(k + 1) * &(ff(k, j) - &(ff(k, m + 1) * ff(m, j)));
            }
        }
    } else {
        for k in m + 1..=2 * m + 1 {
            for j in 1..=m + 1 {
                q[(j - 1, 2 * m + 1 - k)] = &sign(k) * ff(k, j);
            }
        }
    }
    Ok(q)
}

/// Symbolic associated matrix for the given orders.
pub fn build_f_symbolic(orders: &SingularityOrders) -> SymbolicMatrix {
    s_map(&build_q(orders), orders.n()).expect("Q built from orders has the right shape")
}
