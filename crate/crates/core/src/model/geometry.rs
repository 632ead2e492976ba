use serde::{Deserialize, Serialize};

/// Where the problem lives: `[0, 1]` with forms at both ends, or the half-line
/// cut off at `truncation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    FiniteInterval,
    HalfLine { truncation: f64 },
}

impl Geometry {
    pub fn is_finite(&self) -> bool {
        matches!(self, Geometry::FiniteInterval)
    }

    /// Right end of the integration range.
    pub fn right_end(&self) -> f64 {
        match self {
            Geometry::FiniteInterval => 1.0,
            Geometry::HalfLine { truncation } => *truncation,
        }
    }
}
