use serde::{Deserialize, Serialize};

use super::{eta_numeric, EtaResult, HeatScheme, SpectrumModel};
use crate::circle::{CircleOperator, CircleSymbol, FiniteBlock, FullSymbol, Window};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numeric::{c64, hermitian_eigenvalues, CMat, DyadicRational, TrigPoly};

/// η of the truncation of a self-adjoint operator to modes −N..=N, using the
/// eigenvalues with |λ| ≤ Λ (those the truncation reproduces exactly).
pub fn eta_of_truncation(
    op: &CircleOperator,
    n: i64,
    lambda_max: f64,
    exponents: Vec<f64>,
    exec: Execution,
) -> Result<EtaResult> {
    let w = Window::symmetric(n);
    let m = op.matrix(w, w);
    let ev = hermitian_eigenvalues(&m)?;
    let scale = ev.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let kept: Vec<f64> = ev
        .into_iter()
        .filter(|v| v.abs() <= lambda_max)
        .map(|v| if v.abs() < 1e-10 * scale { 0.0 } else { v })
        .collect();
    let model = SpectrumModel::from_eigenvalues(&kept)?;
    let scheme = HeatScheme { exponents, ..HeatScheme::for_model(&model, lambda_max) };
    eta_numeric(&model, &scheme, exec)
}

/// Operator families crossing an eigenvalue through zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpFamily {
    /// (2P − 1)Op(ξ² + 1) − c·ww*, P the projection on modes n ≥ 0
    Odd,
    /// Op(ξ² + 1) − c·ww*
    Even,
}

/// w = (e₀ + e₁)/√2 on modes 0 and 1 of the trivial line.
fn rank_one(c: f64) -> FiniteBlock {
    let w = Window::symmetric(1);
    let mut m = CMat::zeros(3, 3);
    let (i0, i1) = (w.offset(0, 1), w.offset(1, 1));
    for a in [i0, i1] {
        for b in [i0, i1] {
            m[(a, b)] = c64(-c / 2.0, 0.0);
        }
    }
    FiniteBlock::new(1, 1, 1, m).expect("3x3 block")
}

impl JumpFamily {
    /// Both families act on modes 0, 1 by [[1 − c/2, −c/2], [−c/2, 2 − c/2]],
    /// with determinant 2 − 3c/2.
    pub fn crossing(self) -> f64 {
        4.0 / 3.0
    }

    pub fn operator(self, c: f64) -> Result<CircleOperator> {
        let quad = TrigPoly::scalar(c64(1.0, 0.0));
        let base = match self {
            JumpFamily::Odd => CircleSymbol::new(2, quad.clone(), quad.scale(c64(-1.0, 0.0)))?,
            JumpFamily::Even => CircleSymbol::even(2, quad),
        };
        // ξ² + 1: principal part ξ² with lower term 1 at order 0
        let f = FullSymbol::new(vec![base.clone(), CircleSymbol::zero(1, 1, 1), base.with_order(0)])?;
        Ok(CircleOperator::Pdo(f).plus(CircleOperator::Local(rank_one(c))))
    }

    /// Small-t exponents of the heat trace Σ sign(λ) e^{−tλ²}.
    pub fn exponents(self) -> Vec<f64> {
        match self {
            JumpFamily::Odd => vec![0.0, 1.0, 2.0],
            JumpFamily::Even => vec![-0.25, 0.0, 0.25, 0.75],
        }
    }
}

/// One point of a family: η and its fractional part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpPoint {
    pub c: f64,
    pub eta: EtaResult,
    /// η snapped to the nearest integer
    pub eta_integer: i64,
    pub fractional: DyadicRational,
}

/// η along c = 0.1 + 0.2j, j = 0..9, which passes the crossing between
/// grid points.
pub fn eta_jump_family(family: JumpFamily, n: i64, exec: Execution) -> Result<Vec<JumpPoint>> {
    let lambda_max = (n * n + 1) as f64;
    let grid: Vec<f64> = (0..10).map(|j| 0.1 + 0.2 * j as f64).collect();
    let mut out = Vec::with_capacity(grid.len());
    for c in grid {
        let op = family.operator(c)?;
        let eta = eta_of_truncation(&op, n, lambda_max, family.exponents(), exec)?;
        let eta_integer = eta.value.round();
        if (eta.value - eta_integer).abs() > 1e-2f64.max(3.0 * eta.error_estimate) {
            return Err(Error::EtaNotConverged(format!("η({c}) = {} is not resolved", eta.value)));
        }
        let eta_integer = eta_integer as i64;
        out.push(JumpPoint { c, eta, eta_integer, fractional: DyadicRational::integer(eta_integer).fractional_part() });
    }
    Ok(out)
}
