//! η-invariants of model spectra and the dimension functional d.

mod family;
mod heat;
mod spectrum;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use family::{eta_jump_family, eta_of_truncation, JumpFamily, JumpPoint};
pub use heat::{eta_numeric, heat_sum, HeatScheme};
pub use spectrum::{SpectrumKind, SpectrumModel};

pub use crate::numeric::fractional_part;

use crate::circle::{CircleOperator, Parity};
use crate::error::{Error, Result};
use crate::index::{analytic_index, build_parity_double, ordinary_index, IndexConfig, SubspaceOperator};
use crate::numeric::DyadicRational;
use crate::subspaces::{lift_symbol, repeat, Lift, PdoSubspace};

/// How an η value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EtaMethod {
    ClosedForm,
    HeatExtrapolated,
}

/// η(A) = η_A(0) + dim ker A.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaResult {
    pub value: f64,
    pub method: EtaMethod,
    pub error_estimate: f64,
    pub kernel_dim: u64,
}

impl EtaResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("eta results always serialize")
    }
}

/// Closed forms from zeta continuation: ζ_H(0, a) = 1/2 − a gives 1 − 2θ per
/// unit multiplicity for {n + θ}, and the Epstein zeta of the shifted lattice
/// has Z_θ(0) = −1 for θ ∈ ℤ³ and 0 otherwise, with η_A(0) = −Z_θ(0).
pub fn eta_closed_form(model: &SpectrumModel) -> Result<EtaResult> {
    let base = match &model.kind {
        SpectrumKind::ArithmeticProgression { theta, multiplicity } => {
            if *theta == 0.0 {
                0.0
            } else {
                *multiplicity as f64 * (1.0 - 2.0 * theta)
            }
        }
        SpectrumKind::Lattice3Quadratic { theta, .. } => {
            if *theta == [0.0; 3] {
                1.0
            } else {
                0.0
            }
        }
        SpectrumKind::ExplicitList(_) => {
            return Err(Error::Unsupported("no closed form for an explicit eigenvalue list".into()))
        }
    };
    Ok(EtaResult {
        value: base + model.kernel_dim as f64,
        method: EtaMethod::ClosedForm,
        error_estimate: 0.0,
        kernel_dim: model.kernel_dim,
    })
}

/// The two indices behind a value of d.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionResult {
    pub d: DyadicRational,
    pub lift_order: u32,
    pub ind_sigma: i64,
    pub ind_dtilde: i64,
}

/// d(L̂) = 2^{−N}(ind σ̂ − ½ ind D̃) for a lift σ: 2ᴺL → π*F, with σ̂ the
/// quantization of σ on 2ᴺL̂ and D̃ its parity double.
pub fn dimension_functional_with(l: &Arc<PdoSubspace>, lift: &Lift, cfg: &IndexConfig) -> Result<DimensionResult> {
    if l.parity() != Parity::Even {
        return Err(Error::ParityMismatch(format!("d is defined on even subspaces, got {:?}", l.parity())));
    }
    let tol = l.tolerances();
    let copies = lift.copies();
    let source = if copies == 1 { l.clone() } else { Arc::new(repeat(l, copies)?) };
    let target = Arc::new(PdoSubspace::full(lift.f_rank(), tol));
    let sigma_hat = SubspaceOperator::new(CircleOperator::pdo(lift.sigma()), source, target)?
        .with_inverse(lift.restricted_inverse());
    let ind_sigma = analytic_index(&sigma_hat, cfg)?;
    let dt = build_parity_double(&sigma_hat, Parity::Even, cfg.rank_tol)?;
    let ind_dtilde = ordinary_index(&dt, cfg, tol)?;
    let d = DyadicRational::new(2 * ind_sigma - ind_dtilde, lift.order() + 1);
    Ok(DimensionResult { d, lift_order: lift.order(), ind_sigma, ind_dtilde })
}

/// d(L̂) through the lift produced by parallel transport.
pub fn dimension_functional(l: &Arc<PdoSubspace>, cfg: &IndexConfig) -> Result<DyadicRational> {
    Ok(dimension_functional_detailed(l, cfg)?.d)
}

pub fn dimension_functional_detailed(l: &Arc<PdoSubspace>, cfg: &IndexConfig) -> Result<DimensionResult> {
    let lift = lift_symbol(l.symbol(), cfg.rank_tol)?;
    dimension_functional_with(l, &lift, cfg)
}
