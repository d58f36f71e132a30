use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Exactly described eigenvalue multiset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpectrumKind {
    /// {n + θ : n ∈ ℤ}, each value with the given multiplicity
    ArithmeticProgression { theta: f64, multiplicity: u32 },
    /// +|k+θ|² once and −|k+θ|² twice for each k ∈ ℤ³ with 0 < |k+θ| ≤ cutoff
    Lattice3Quadratic { theta: [f64; 3], cutoff: f64 },
    /// finite list of (eigenvalue, multiplicity)
    ExplicitList(Vec<(f64, u64)>),
}

/// A spectrum together with the dimension of the kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    pub kind: SpectrumKind,
    pub kernel_dim: u64,
}

fn reduce_unit(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl SpectrumModel {
    /// {n + θ}; the zero eigenvalue, present when θ ∈ ℤ, is the kernel.
    pub fn arithmetic(theta: f64, multiplicity: u32) -> Result<Self> {
        if multiplicity == 0 || !theta.is_finite() {
            return Err(Error::Precondition("multiplicity must be positive and θ finite".into()));
        }
        let th = reduce_unit(theta);
        let kernel_dim = if th == 0.0 { multiplicity as u64 } else { 0 };
        Ok(SpectrumModel { kind: SpectrumKind::ArithmeticProgression { theta: th, multiplicity }, kernel_dim })
    }

    /// Spectrum of dδ − δd on 1-forms over the flat 3-torus twisted by θ.
    pub fn lattice(theta: [f64; 3], cutoff: f64) -> Result<Self> {
        if !(cutoff >= 8.0) || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Precondition("lattice cutoff must be at least 8 and θ finite".into()));
        }
        let th = theta.map(reduce_unit);
        let kernel_dim = if th == [0.0; 3] { 3 } else { 0 };
        Ok(SpectrumModel { kind: SpectrumKind::Lattice3Quadratic { theta: th, cutoff }, kernel_dim })
    }

    /// Explicit eigenvalues; exact zeros are moved to the kernel.
    pub fn explicit(values: Vec<(f64, u64)>) -> Result<Self> {
        let mut kernel = 0;
        let mut rest = Vec::with_capacity(values.len());
        for (v, m) in values {
            if !v.is_finite() || m == 0 {
                return Err(Error::Precondition("eigenvalues must be finite with positive multiplicity".into()));
            }
            if v == 0.0 {
                kernel += m;
            } else {
                rest.push((v, m));
            }
        }
        Ok(SpectrumModel { kind: SpectrumKind::ExplicitList(rest), kernel_dim: kernel })
    }

    /// Eigenvalues of a Hermitian matrix, grouped by value.
    pub fn from_eigenvalues(values: &[f64]) -> Result<Self> {
        Self::explicit(values.iter().map(|&v| (v, 1)).collect())
    }

    /// Largest |λ| up to which the described list is complete, if finite.
    pub fn completeness_bound(&self) -> Option<f64> {
        match &self.kind {
            SpectrumKind::ArithmeticProgression { .. } => None,
            SpectrumKind::Lattice3Quadratic { cutoff, .. } => Some(cutoff * cutoff),
            SpectrumKind::ExplicitList(v) => Some(v.iter().fold(0.0, |a, (x, _)| a.max(x.abs()))),
        }
    }

    /// Nonzero levels μ = |λ| in ascending order with signed multiplicity
    /// Σ sign(λ)·mult over λ = ±μ, restricted to μ ≤ bound.
    pub fn signed_levels(&self, bound: f64, exec: Execution) -> Vec<(f64, i64)> {
        let mut raw: Vec<(f64, i64)> = match &self.kind {
            SpectrumKind::ArithmeticProgression { theta, multiplicity } => {
                let m = *multiplicity as i64;
                let lo = (-bound - theta).ceil() as i64;
                let hi = (bound - theta).floor() as i64;
                (lo..=hi)
                    .map(|n| n as f64 + theta)
                    .filter(|&v| v != 0.0)
                    .map(|v| (v.abs(), if v > 0.0 { m } else { -m }))
                    .collect()
            }
            SpectrumKind::Lattice3Quadratic { theta, cutoff } => {
                let r = cutoff.min(bound.max(0.0).sqrt());
                crate::torus::lattice_shells(*theta, r, exec)
                    .into_iter()
                    .map(|(mu, count)| (mu, -(count as i64)))
                    .collect()
            }
            SpectrumKind::ExplicitList(v) => v
                .iter()
                .filter(|(x, _)| x.abs() <= bound)
                .map(|&(x, m)| (x.abs(), if x > 0.0 { m as i64 } else { -(m as i64) }))
                .collect(),
        };
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, i64)> = Vec::with_capacity(raw.len());
        for (mu, s) in raw {
            match out.last_mut() {
                Some(last) if last.0 == mu => last.1 += s,
                _ => out.push((mu, s)),
            }
        }
        out.retain(|&(_, s)| s != 0);
        out
    }

    /// CSV listing (eigenvalue, multiplicity) up to |λ| ≤ bound, kernel first.
    pub fn to_csv(&self, bound: f64, exec: Execution) -> String {
        let mut out = String::from("eigenvalue,multiplicity\n");
        if self.kernel_dim > 0 {
            writeln!(out, "0,{}", self.kernel_dim).expect("string write");
        }
        let rows: Vec<(f64, u64)> = match &self.kind {
            SpectrumKind::Lattice3Quadratic { theta, cutoff } => {
                let r = cutoff.min(bound.sqrt());
                crate::torus::lattice_shells(*theta, r, exec)
                    .into_iter()
                    .flat_map(|(mu, c)| [(mu, c), (-mu, 2 * c)])
                    .collect()
            }
            SpectrumKind::ArithmeticProgression { theta, multiplicity } => {
                let lo = (-bound - theta).ceil() as i64;
                let hi = (bound - theta).floor() as i64;
                (lo..=hi).map(|n| n as f64 + theta).filter(|&v| v != 0.0).map(|v| (v, *multiplicity as u64)).collect()
            }
            SpectrumKind::ExplicitList(v) => v.iter().copied().filter(|(x, _)| x.abs() <= bound).collect(),
        };
        for (v, m) in rows {
            writeln!(out, "{v:.17e},{m}").expect("string write");
        }
        out
    }
}
