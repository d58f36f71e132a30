//! The operator dδ − δd on 1-forms over the flat 3-torus, twisted by flat
//! line bundles.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::{eta_closed_form, eta_numeric, EtaResult, HeatScheme, SpectrumModel};
use crate::exec::Execution;
use crate::numeric::DyadicRational;

/// Holonomy exponents θ of a flat U(1) connection, reduced to [0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistCharacter {
    theta: [f64; 3],
}

impl TwistCharacter {
    pub fn new(theta: [f64; 3]) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Precondition("twist must be finite".into()));
        }
        Ok(TwistCharacter {
            theta: theta.map(|t| {
                let r = t - t.floor();
                if r >= 1.0 {
                    0.0
                } else {
                    r
                }
            }),
        })
    }

    pub fn trivial() -> Self {
        TwistCharacter { theta: [0.0; 3] }
    }

    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }

    pub fn is_trivial(&self) -> bool {
        self.theta == [0.0; 3]
    }
}

/// |k + θ|² as summed in a fixed order.
fn shifted_norm2(k: [i64; 3], theta: [f64; 3]) -> f64 {
    let a = k[0] as f64 + theta[0];
    let b = k[1] as f64 + theta[1];
    let c = k[2] as f64 + theta[2];
    a * a + b * b + c * c
}

/// Lattice points k ∈ ℤ³ with 0 < |k + θ| ≤ r, sorted by (|k+θ|², k).
pub fn lattice_points(theta: [f64; 3], r: f64, exec: Execution) -> Vec<(f64, [i64; 3])> {
    if !(r > 0.0) {
        return Vec::new();
    }
    let r2 = r * r;
    let lo = |t: f64| (-r - t).floor() as i64;
    let hi = |t: f64| (r - t).ceil() as i64;
    let slabs: Vec<i64> = (lo(theta[0])..=hi(theta[0])).collect();
    let parts = exec.map(&slabs, |&k0| {
        let mut out = Vec::new();
        for k1 in lo(theta[1])..=hi(theta[1]) {
            for k2 in lo(theta[2])..=hi(theta[2]) {
                let k = [k0, k1, k2];
                let mu = shifted_norm2(k, theta);
                if mu > 0.0 && mu <= r2 {
                    out.push((mu, k));
                }
            }
        }
        out
    });
    let mut all: Vec<(f64, [i64; 3])> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all
}

/// Shells (|k+θ|², number of lattice points) with 0 < |k+θ| ≤ r, ascending.
pub fn lattice_shells(theta: [f64; 3], r: f64, exec: Execution) -> Vec<(f64, u64)> {
    let mut out: Vec<(f64, u64)> = Vec::new();
    for (mu, _) in lattice_points(theta, r, exec) {
        match out.last_mut() {
            Some(last) if last.0 == mu => last.1 += 1,
            _ => out.push((mu, 1)),
        }
    }
    out
}

/// σ(ξ) = ξ∧ξ⌋ − ξ⌋ξ∧ on 1-forms, i.e. 2ξξᵀ − |ξ|² I.
pub fn forms_symbol(xi: [f64; 3]) -> Result<Matrix3<f64>> {
    let v = Vector3::from(xi);
    let n2 = v.norm_squared();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::Precondition("symbol needs a nonzero finite covector".into()));
    }
    Ok(2.0 * v * v.transpose() - Matrix3::identity() * n2)
}

/// Eigenvalues of dδ − δd with |k + θ| ≤ R.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSpectrum {
    pub cutoff: f64,
    pub twist: TwistCharacter,
    /// (eigenvalue, multiplicity), ordered by |eigenvalue| with + before −
    pub entries: Vec<(f64, u64)>,
    pub kernel_dim: u64,
}

impl FormSpectrum {
    pub fn positive_count(&self) -> u64 {
        self.entries.iter().filter(|e| e.0 > 0.0).map(|e| e.1).sum()
    }

    pub fn negative_count(&self) -> u64 {
        self.entries.iter().filter(|e| e.0 < 0.0).map(|e| e.1).sum()
    }

    pub fn total_count(&self) -> u64 {
        self.positive_count() + self.negative_count() + self.kernel_dim
    }
}

/// On the mode e^{i⟨k,x⟩} ⊗ (flat section) the operator acts by
/// −σ(k + θ), so each shell carries +μ once and −μ twice.
pub fn t3_spectrum(r: f64, twist: TwistCharacter, exec: Execution) -> Result<FormSpectrum> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Precondition("cutoff must be positive".into()));
    }
    let entries =
        lattice_shells(twist.theta(), r, exec).into_iter().flat_map(|(mu, c)| [(mu, c), (-mu, 2 * c)]).collect();
    let kernel_dim = if twist.is_trivial() { 3 } else { 0 };
    Ok(FormSpectrum { cutoff: r, twist, entries, kernel_dim })
}

/// η of dδ − δd with its fractional part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormsEta {
    pub numeric: EtaResult,
    pub closed_form: EtaResult,
    /// |numeric − closed form| before snapping
    pub deviation: f64,
    pub fractional: DyadicRational,
}

/// Heat-extrapolated η on the lattice spectrum, cross-checked against the
/// closed form; the fractional part is snapped to the nearest integer when
/// the numeric value lies within the accepted band around it.
pub fn forms_eta(twist: TwistCharacter, r: f64, eta_tol: f64, exec: Execution) -> Result<FormsEta> {
    let model = SpectrumModel::lattice(twist.theta(), r)?;
    let scheme = HeatScheme::for_model(&model, r * r);
    let numeric = eta_numeric(&model, &scheme, exec)?;
    let closed_form = eta_closed_form(&model)?;
    let band = eta_tol.max(3.0 * numeric.error_estimate);
    let deviation = (numeric.value - closed_form.value).abs();
    if deviation > band {
        return Err(Error::EtaNotConverged(format!(
            "numeric η {} misses the closed form {} by {deviation:e}",
            numeric.value, closed_form.value
        )));
    }
    let nearest = numeric.value.round();
    if (numeric.value - nearest).abs() > band {
        return Err(Error::EtaNotConverged(format!("η = {} is not resolved to an integer", numeric.value)));
    }
    let fractional = DyadicRational::integer(nearest as i64).fractional_part();
    Ok(FormsEta { numeric, closed_form, deviation, fractional })
}

/// True iff every value is an integer or a half-integer.
pub fn orientability_halfinteger_check(values: &[DyadicRational]) -> bool {
    values.iter().all(|v| v.exponent() <= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_on_first_axis() {
        let s = forms_symbol([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s, Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0)));
        assert!(forms_symbol([0.0; 3]).is_err());
    }

    #[test]
    fn unit_shell() {
        let s = t3_spectrum(1.5, TwistCharacter::trivial(), Execution::Sequential).unwrap();
        assert_eq!(s.kernel_dim, 3);
        assert_eq!(s.entries[0], (1.0, 6));
        assert_eq!(s.entries[1], (-1.0, 12));
        assert_eq!(s.negative_count(), 2 * s.positive_count());
    }

    #[test]
    fn half_twist_has_no_kernel() {
        let t = TwistCharacter::new([0.5, 0.0, 0.0]).unwrap();
        assert_eq!(t3_spectrum(3.0, t, Execution::Sequential).unwrap().kernel_dim, 0);
    }

    #[test]
    fn halfinteger_values() {
        let ok = [DyadicRational::ZERO, DyadicRational::integer(-1), DyadicRational::new(1, 1)];
        assert!(orientability_halfinteger_check(&ok));
        assert!(!orientability_halfinteger_check(&[DyadicRational::new(1, 2)]));
    }
}
