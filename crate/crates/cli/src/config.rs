//! Run configuration: a TOML file with [run], [twist], [tolerances], [eta],
//! [modn] and [output] sections. Every section and key is optional; missing
//! values take the defaults below. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    S1,
    T3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub model: Model,
    /// base truncation N; indices are read at N, 2N and 3N
    pub truncation: i64,
    pub moduli: Vec<u64>,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { model: Model::S1, truncation: 32, moduli: vec![2, 3, 4, 8], seed: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwistSection {
    pub theta: [f64; 3],
    /// extra seeded random twists on top of `theta`
    pub random: usize,
}

impl Default for TwistSection {
    fn default() -> Self {
        TwistSection { theta: [0.0; 3], random: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TolerancesSection {
    pub rank_tol: f64,
    pub eig_tol: f64,
    /// accepted distance of a heat-extrapolated η from its closed form
    pub eta_tol: f64,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        TolerancesSection { rank_tol: 1e-6, eig_tol: 1e-9, eta_tol: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EtaSection {
    /// shifts θ of the arithmetic spectra {n + θ}
    pub thetas: Vec<f64>,
    /// largest |λ| kept for the arithmetic spectra
    pub lambda_max: f64,
    /// radius R of the lattice ball on the 3-torus
    pub cutoff: f64,
}

impl Default for EtaSection {
    fn default() -> Self {
        EtaSection { thetas: vec![0.1, 0.25, 0.5, 0.9], lambda_max: 2000.0, cutoff: 40.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModnSection {
    pub operators: usize,
    pub perturbations: usize,
}

impl Default for ModnSection {
    fn default() -> Self {
        ModnSection { operators: 10, perturbations: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("."), format: Format::Json }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub twist: TwistSection,
    pub tolerances: TolerancesSection,
    pub eta: EtaSection,
    pub modn: ModnSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError(m.into()));
        if self.run.truncation < 16 {
            return bad("run.truncation must be at least 16");
        }
        if self.run.moduli.iter().any(|&n| n < 2) {
            return bad("run.moduli must all be at least 2");
        }
        if self.twist.theta.iter().any(|t| !t.is_finite()) {
            return bad("twist.theta must be finite");
        }
        let t = &self.tolerances;
        if [t.rank_tol, t.eig_tol, t.eta_tol].iter().any(|v| !v.is_finite() || *v <= 0.0) || t.rank_tol >= 1e-3 {
            return bad("tolerances must be positive and rank_tol below 1e-3");
        }
        if self.eta.thetas.iter().any(|&th| !(th > 0.0 && th < 1.0)) {
            return bad("eta.thetas must lie in (0, 1)");
        }
        if self.eta.lambda_max < 50.0 || self.eta.cutoff < 8.0 {
            return bad("eta.lambda_max must be at least 50 and eta.cutoff at least 8");
        }
        Ok(())
    }
}
