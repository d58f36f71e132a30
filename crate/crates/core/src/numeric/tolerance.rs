use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by all modules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular-value threshold for ranks and near-null counts.
    pub rank_tol: f64,
    /// Tolerance for eigen-decomposition residuals and projection identities.
    pub eig_tol: f64,
    /// Agreement tolerance for eta values.
    pub eta_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { rank_tol: 1e-6, eig_tol: 1e-9, eta_tol: 1e-6 }
    }
}

impl ToleranceConfig {
    pub fn new(rank_tol: f64, eig_tol: f64, eta_tol: f64) -> Result<Self> {
        let t = ToleranceConfig { rank_tol, eig_tol, eta_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.rank_tol, self.eig_tol, self.eta_tol].iter().all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(Error::Precondition("tolerances must be finite and positive".into()));
        }
        if self.rank_tol >= 1e-3 {
            return Err(Error::Precondition("rank_tol must be below 1e-3".into()));
        }
        Ok(())
    }
}
