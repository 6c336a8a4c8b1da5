//! Certified interval results.

use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// A numeric result reported honestly: either exact (lower = upper) or a
/// bracketing interval with `exact = false`.
///
/// `witness`, when present, is an input achieving the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vector>,
}

impl CertifiedValue {
    pub fn exact(value: f64, witness: Option<Vector>) -> Self {
        Self {
            lower: value,
            upper: value,
            exact: true,
            witness,
        }
    }

    pub fn interval(lower: f64, upper: f64, witness: Option<Vector>) -> Self {
        debug_assert!(lower <= upper || upper.is_nan());
        Self {
            lower,
            upper: upper.max(lower),
            exact: false,
            witness,
        }
    }

    /// Point value for exact results, midpoint otherwise (infinite upper
    /// bounds fall back to the lower bound).
    pub fn value(&self) -> f64 {
        if self.exact || !self.upper.is_finite() {
            self.lower
        } else {
            0.5 * (self.lower + self.upper)
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Interval overlap test used by consistency checks.
    pub fn overlaps(&self, other: &CertifiedValue, tol: f64) -> bool {
        self.lower <= other.upper + tol && other.lower <= self.upper + tol
    }
}
