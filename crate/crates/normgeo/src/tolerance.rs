//! Tolerance profile shared by every operation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Numeric tolerances and the iteration budget.
///
/// `eps_exact` guards closed-form identities, `eps_iter` is the
/// convergence and feasibility tolerance for iterative solvers, and
/// `max_iter` caps every iteration loop.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub eps_exact: f64,
    pub eps_iter: f64,
    pub max_iter: usize,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            eps_exact: 1e-9,
            eps_iter: 1e-7,
            max_iter: 10_000,
        }
    }
}

impl ToleranceProfile {
    pub fn new(eps_exact: f64, eps_iter: f64, max_iter: usize) -> Result<Self> {
        let p = Self {
            eps_exact,
            eps_iter,
            max_iter,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_exact > 0.0 && self.eps_exact <= self.eps_iter) {
            return Err(Error::InvalidTolerance(format!(
                "need 0 < eps_exact <= eps_iter, got {} and {}",
                self.eps_exact, self.eps_iter
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidTolerance("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}
