use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{EtaMethod, EtaResult, SpectrumKind, SpectrumModel};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Parameters of the heat-regularized η: the signed sum
/// Σ sign(λ) e^{−tλ²} is sampled on t_j = t_min·ratio^j and extrapolated to
/// t → 0 by fitting the leading small-t powers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatScheme {
    /// spectral cutoff Λ: all |λ| ≤ Λ enter the sums
    pub lambda_max: f64,
    /// t_min = t_factor / Λ², so that e^{−t λ²} at the cutoff is negligible
    pub t_factor: f64,
    pub ratio: f64,
    /// small-t exponents fitted; must contain 0 (the η value)
    pub exponents: Vec<f64>,
    /// ceiling on the spread of the last two extrapolants
    pub max_spread: f64,
}

impl HeatScheme {
    /// Defaults for a spectrum kind: integer powers for spectra on a line,
    /// plus the t^{−3/4} volume term for 3-dimensional lattices.
    pub fn for_model(model: &SpectrumModel, lambda_max: f64) -> Self {
        let exponents = match model.kind {
            SpectrumKind::Lattice3Quadratic { .. } => vec![-0.75, 0.0, 1.0],
            _ => vec![0.0, 1.0, 2.0],
        };
        HeatScheme { lambda_max, t_factor: 40.0, ratio: 2.0, exponents, max_spread: 0.05 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_max > 0.0 && self.t_factor > 0.0 && self.ratio > 1.0) {
            return Err(Error::Precondition("heat scheme needs Λ > 0, t_factor > 0 and ratio > 1".into()));
        }
        if !self.exponents.contains(&0.0) {
            return Err(Error::Precondition("heat scheme exponents must include 0".into()));
        }
        Ok(())
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let t0 = self.t_factor / (self.lambda_max * self.lambda_max);
        (0..=self.exponents.len()).map(|j| t0 * self.ratio.powi(j as i32)).collect()
    }
}

/// Σ_levels s·e^{−tμ²} with the levels in ascending order and fixed chunks.
pub fn heat_sum(levels: &[(f64, i64)], t: f64, exec: Execution) -> f64 {
    exec.chunked_sum(levels, 4096, |&(mu, s)| s as f64 * (-t * mu * mu).exp())
}

/// Value at t = 0 of Σ c_i t^{e_i} fitted through the given points.
fn extrapolate(ts: &[f64], fs: &[f64], exponents: &[f64]) -> Result<f64> {
    let p = exponents.len();
    let scale = ts[0];
    let a = DMatrix::from_fn(p, p, |i, j| (ts[i] / scale).powf(exponents[j]));
    let b = DVector::from_column_slice(fs);
    let sol = a.lu().solve(&b).ok_or_else(|| Error::EtaNotConverged("singular extrapolation system".into()))?;
    let zero = exponents.iter().position(|&e| e == 0.0).expect("validated");
    Ok(sol[zero])
}

/// Heat-regularized η(A) = η_A(0) + dim ker A.
pub fn eta_numeric(model: &SpectrumModel, scheme: &HeatScheme, exec: Execution) -> Result<EtaResult> {
    scheme.validate()?;
    if let Some(bound) = model.completeness_bound() {
        if scheme.lambda_max > bound * (1.0 + 1e-12) && !matches!(model.kind, SpectrumKind::ExplicitList(_)) {
            return Err(Error::Precondition(format!(
                "spectrum is only complete up to |λ| ≤ {bound}, scheme asks for {}",
                scheme.lambda_max
            )));
        }
    }
    let levels = model.signed_levels(scheme.lambda_max, exec);
    let ts = scheme.t_grid();
    let fs: Vec<f64> = ts.iter().map(|&t| heat_sum(&levels, t, exec)).collect();
    let p = scheme.exponents.len();
    let first = extrapolate(&ts[..p], &fs[..p], &scheme.exponents)?;
    let second = extrapolate(&ts[1..=p], &fs[1..=p], &scheme.exponents)?;
    let weight: f64 = levels.iter().map(|&(_, s)| s.unsigned_abs() as f64).sum::<f64>().max(1.0);
    let floor = f64::EPSILON * weight;
    let spread = (first - second).abs().max(floor).max(f64::MIN_POSITIVE);
    if !first.is_finite() || spread > scheme.max_spread {
        return Err(Error::EtaNotConverged(format!("extrapolants {first} and {second} differ by {spread:e}")));
    }
    Ok(EtaResult {
        value: first + model.kernel_dim as f64,
        method: EtaMethod::HeatExtrapolated,
        error_estimate: spread,
        kernel_dim: model.kernel_dim,
    })
}
