//! Numerical settings shared by every pipeline.

use serde::Serialize;

use crate::disk_analytic::check_grid;
use crate::factorization::{FactorConfig, DEFAULT_EDGE_MARGIN, DEFAULT_OUTER_TOL};
use crate::fock_state::DEFAULT_TRUNCATION;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    /// Truncation `N`.
    pub truncation: usize,
    /// Boundary grid `M`, a power of two with `M >= 2N`.
    pub grid: usize,
    pub outer_tol: f64,
    pub edge_margin: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::with_truncation(DEFAULT_TRUNCATION)
    }
}

impl RunConfig {
    /// Defaults with `M = 4N` rounded up to a power of two.
    pub fn with_truncation(n: usize) -> Self {
        Self {
            truncation: n,
            grid: (4 * n.max(1)).next_power_of_two(),
            outer_tol: DEFAULT_OUTER_TOL,
            edge_margin: DEFAULT_EDGE_MARGIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::Truncation("truncation N must be at least one".into()));
        }
        check_grid(self.grid, 2 * self.truncation)?;
        for (name, v) in [("outer_tol", self.outer_tol), ("edge_margin", self.edge_margin)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
            }
        }
        if self.edge_margin >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "edge_margin = {} must be below one",
                self.edge_margin
            )));
        }
        Ok(())
    }

    pub fn factor_config(&self) -> FactorConfig {
        FactorConfig {
            grid: self.grid,
            outer_tol: self.outer_tol,
            edge_margin: self.edge_margin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        assert_eq!(RunConfig::with_truncation(64).grid, 256);
        let bad = RunConfig { grid: 64, ..RunConfig::with_truncation(64) };
        assert!(matches!(bad.validate(), Err(Error::Aliasing { .. })));
        let bad = RunConfig { grid: 300, ..RunConfig::with_truncation(64) };
        assert!(bad.validate().is_err());
        let bad = RunConfig { outer_tol: 0.0, ..RunConfig::with_truncation(8) };
        assert!(bad.validate().is_err());
        let bad = RunConfig { truncation: 0, ..RunConfig::with_truncation(8) };
        assert!(bad.validate().is_err());
    }
}
