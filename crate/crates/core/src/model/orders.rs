use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Validated tuple of singularity orders `(i_0, ..., i_{n-2})` for an
/// expression of order `n = 2m + tau`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrders", into = "RawOrders")]
pub struct SingularityOrders {
    n: usize,
    m: usize,
    tau: usize,
    orders: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawOrders {
    n: usize,
    orders: Vec<usize>,
}

impl TryFrom<RawOrders> for SingularityOrders {
    type Error = Error;
    fn try_from(raw: RawOrders) -> Result<Self> {
        validate_orders(raw.n, &raw.orders)
    }
}

impl From<SingularityOrders> for RawOrders {
    fn from(o: SingularityOrders) -> Self {
        RawOrders { n: o.n, orders: o.orders }
    }
}

/// Upper bound on `i_nu`: `m - k` for `nu = 2k`, `m - k - 1` for `nu = 2k + 1`.
pub fn order_bound(n: usize, nu: usize) -> usize {
    let m = n / 2;
    let k = nu / 2;
    if nu % 2 == 0 {
        m - k
    } else {
        m - k - 1
    }
}

pub fn validate_orders(n: usize, orders: &[usize]) -> Result<SingularityOrders> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    if orders.len() != n - 1 {
        return Err(Error::LengthMismatch { expected: n - 1, actual: orders.len() });
    }
    for (nu, &i) in orders.iter().enumerate() {
        if i > order_bound(n, nu) {
            return Err(Error::OrderOutOfRange(nu));
        }
    }
    Ok(SingularityOrders { n, m: n / 2, tau: n % 2, orders: orders.to_vec() })
}

impl SingularityOrders {
    /// The regular case, all orders zero.
    pub fn regular(n: usize) -> Result<Self> {
        validate_orders(n, &vec![0; n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order(&self, nu: usize) -> usize {
        self.orders[nu]
    }

    pub fn bound(&self, nu: usize) -> usize {
        order_bound(self.n, nu)
    }

    pub fn singular_set(&self) -> SingularIndexSet {
        singular_set(self)
    }

    /// Every admissible tuple for order `n`, in lexicographic order.
    pub fn enumerate(n: usize) -> Result<Vec<SingularityOrders>> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        let bounds: Vec<usize> = (0..n - 1).map(|nu| order_bound(n, nu)).collect();
        let mut out = Vec::new();
        let mut cur = vec![0usize; n - 1];
        loop {
            out.push(SingularityOrders { n, m: n / 2, tau: n % 2, orders: cur.clone() });
            let mut pos = n - 1;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                if cur[pos] < bounds[pos] {
                    cur[pos] += 1;
                    cur[pos + 1..].iter_mut().for_each(|c| *c = 0);
                    break;
                }
            }
        }
    }
}

/// The set `K(I)` of indices whose order attains its maximum (even `n` only).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularIndexSet {
    pub members: BTreeSet<usize>,
}

impl SingularIndexSet {
    pub fn contains(&self, nu: usize) -> bool {
        self.members.contains(&nu)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn singular_set(orders: &SingularityOrders) -> SingularIndexSet {
    let mut members = BTreeSet::new();
    if orders.tau == 0 {
        for (nu, &i) in orders.orders.iter().enumerate() {
            if i == orders.bound(nu) {
                members.insert(nu);
            }
        }
    }
    SingularIndexSet { members }
}
