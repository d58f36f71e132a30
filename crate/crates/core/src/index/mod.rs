//! Fredholm indices of operators acting in subspaces, read off Fourier
//! truncations at three scales.

mod nullity;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use nullity::{coordinate_nullity, interior_count, near_null};

use crate::circle::{
    ellipticity_check, symbol_grid, CircleOperator, CircleSymbol, EllipticityReport, Face, Parity, Window,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numeric::{c64, frobenius, CMat, DyadicRational, TrigPoly};
use crate::subspaces::{PdoSubspace, SubspaceSymbol};

/// Truncation and tolerance settings for index computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexConfig {
    /// smallest of the three truncation scales N, 2N, 3N
    pub base_n: i64,
    pub rank_tol: f64,
    pub execution: Execution,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { base_n: 32, rank_tol: 1e-6, execution: Execution::default() }
    }
}

impl IndexConfig {
    pub fn with_base(self, base_n: i64) -> Self {
        IndexConfig { base_n, ..self }
    }
}

/// D: L̂₁ → L̂₂, stored as an operator on the ambient bundles together with
/// its source and target. Indices are always those of P₂ D restricted to L̂₁.
#[derive(Clone, Debug)]
pub struct SubspaceOperator {
    op: CircleOperator,
    source: Arc<PdoSubspace>,
    target: Arc<PdoSubspace>,
    inverse: Option<CircleSymbol>,
}

impl SubspaceOperator {
    pub fn new(op: CircleOperator, source: Arc<PdoSubspace>, target: Arc<PdoSubspace>) -> Result<Self> {
        op.validate()?;
        if op.cols_rank() != source.rank() || op.rows_rank() != target.rank() {
            return Err(Error::Structural(format!(
                "operator maps rank {} to rank {}, subspaces live in ranks {} and {}",
                op.cols_rank(),
                op.rows_rank(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(SubspaceOperator { op, source, target, inverse: None })
    }

    /// Operator between the full section spaces of trivial bundles.
    pub fn ordinary(op: CircleOperator, tol: crate::numeric::ToleranceConfig) -> Result<Self> {
        let s = Arc::new(PdoSubspace::full(op.cols_rank(), tol));
        let t = Arc::new(PdoSubspace::full(op.rows_rank(), tol));
        SubspaceOperator::new(op, s, t)
    }

    /// Attaches a symbol ρ: E₂ → E₁ inverting σ(D) between L₂ and L₁.
    pub fn with_inverse(mut self, rho: CircleSymbol) -> Self {
        self.inverse = Some(rho);
        self
    }

    pub fn operator(&self) -> &CircleOperator {
        &self.op
    }

    pub fn source(&self) -> &Arc<PdoSubspace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PdoSubspace> {
        &self.target
    }

    pub fn inverse(&self) -> Option<&CircleSymbol> {
        self.inverse.as_ref()
    }

    pub fn symbol(&self) -> Result<CircleSymbol> {
        self.op.principal_symbol()
    }

    /// p₂ σ(D) p₁.
    pub fn restricted_symbol(&self) -> Result<CircleSymbol> {
        let s = self.symbol()?;
        let p1 = self.source.symbol().projection();
        let p2 = self.target.symbol().projection().with_order(0);
        p2.compose(&s)?.compose(&p1.with_order(0))
    }

    pub fn ellipticity(&self, rank_tol: f64) -> Result<EllipticityReport> {
        ellipticity_check(&self.restricted_symbol()?, self.source.symbol(), self.target.symbol(), rank_tol)
    }

    /// P₂ D P₁ on modes −N..=N.
    pub fn compressed(&self, n: i64) -> Result<CMat> {
        let w = Window::symmetric(n);
        let p1 = self.source.projection(n)?;
        let p2 = self.target.projection(n)?;
        Ok(p2 * self.op.matrix(w, w) * p1)
    }

    /// Composition D₂ ∘ D₁ for D₁: L̂₁ → L̂₂, D₂: L̂₂ → L̂₃.
    pub fn then(&self, next: &SubspaceOperator) -> Result<SubspaceOperator> {
        if !Arc::ptr_eq(&self.target, &next.source) {
            return Err(Error::Structural("operators are not composable".into()));
        }
        SubspaceOperator::new(next.op.clone().compose(self.op.clone()), self.source.clone(), next.target.clone())
    }

    /// Same subspaces, perturbed operator.
    pub fn with_operator(&self, op: CircleOperator) -> Result<SubspaceOperator> {
        let mut out = SubspaceOperator::new(op, self.source.clone(), self.target.clone())?;
        out.inverse = self.inverse.clone();
        Ok(out)
    }
}

/// Which truncation scheme produced an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexMethod {
    /// rectangular truncation in frame coordinates
    Banded,
    /// square truncation with boundary-state filtering
    Dense,
}

/// An index together with the per-scale values that confirmed it.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub index: i64,
    pub scales: Vec<(i64, i64)>,
    pub method: IndexMethod,
}

fn method_for(op: &SubspaceOperator) -> IndexMethod {
    if op.source.as_framed().is_some() && op.target.as_framed().is_some() {
        IndexMethod::Banded
    } else {
        IndexMethod::Dense
    }
}

/// Index of D at a single truncation N.
pub fn index_at(op: &SubspaceOperator, n: i64, rank_tol: f64) -> Result<i64> {
    match (op.source.as_framed(), op.target.as_framed()) {
        (Some(f1), Some(f2)) => {
            let g = f2.inverse_frame_operator()?.compose(op.op.clone()).compose(f1.frame_operator());
            let ker = coordinate_nullity(&g, n, f1.coords(), f2.coords(), rank_tol)?;
            let coker = coordinate_nullity(&g.adjoint(), n, f2.coords(), f1.coords(), rank_tol)?;
            Ok(ker as i64 - coker as i64)
        }
        _ => {
            let w = Window::symmetric(n);
            let t = op.op.matrix(w, w);
            let b1 = &op.source.realization(n)?.basis;
            let b2 = &op.target.realization(n)?.basis;
            let m = b2.adjoint() * t * b1;
            let z1 = near_null(&m, rank_tol)?;
            let z2 = near_null(&m.adjoint(), rank_tol)?;
            let ker = interior_count(&(b1 * z1), w, op.source.rank())?;
            let coker = interior_count(&(b2 * z2), w, op.target.rank())?;
            Ok(ker as i64 - coker as i64)
        }
    }
}

fn base_scale(op: &SubspaceOperator, cfg: &IndexConfig) -> i64 {
    let need = op.source.min_truncation().max(op.target.min_truncation())
        + op.op.localization_radius()
        + op.op.bandwidth()
        + 1;
    cfg.base_n.max(need)
}

/// Fredholm index with the three-scale acceptance rule: the values at N, 2N
/// and 3N must coincide.
pub fn analytic_index_report(op: &SubspaceOperator, cfg: &IndexConfig) -> Result<IndexReport> {
    let report = op.ellipticity(cfg.rank_tol)?;
    if !report.elliptic {
        return Err(Error::Precondition(format!(
            "operator is not elliptic: {}",
            report.diagnostic.unwrap_or_default()
        )));
    }
    let n0 = base_scale(op, cfg);
    let scales = [n0, 2 * n0, 3 * n0];
    let values = cfg.execution.map(&scales, |&n| index_at(op, n, cfg.rank_tol));
    let mut pairs = Vec::with_capacity(3);
    for (n, v) in scales.iter().zip(values) {
        pairs.push((*n, v?));
    }
    if pairs.iter().any(|p| p.1 != pairs[0].1) {
        return Err(Error::UnstableIndex(pairs));
    }
    Ok(IndexReport { index: pairs[0].1, scales: pairs, method: method_for(op) })
}

pub fn analytic_index(op: &SubspaceOperator, cfg: &IndexConfig) -> Result<i64> {
    Ok(analytic_index_report(op, cfg)?.index)
}

/// Index of an operator between full section spaces.
pub fn ordinary_index(op: &CircleOperator, cfg: &IndexConfig, tol: crate::numeric::ToleranceConfig) -> Result<i64> {
    analytic_index(&SubspaceOperator::ordinary(op.clone(), tol)?, cfg)
}

/// ind(P₂ : L̂₁ → L̂₂) for subspaces with the same symbol.
pub fn relative_index(l1: &Arc<PdoSubspace>, l2: &Arc<PdoSubspace>, cfg: &IndexConfig) -> Result<i64> {
    if l1.rank() != l2.rank() {
        return Err(Error::Structural("subspaces live in different bundles".into()));
    }
    let dist = l1.symbol().distance(l2.symbol());
    if dist > 1e3 * cfg.rank_tol {
        return Err(Error::Precondition(format!("relative index needs equal symbols (distance {dist:e})")));
    }
    let id = SubspaceOperator::new(CircleOperator::identity(l1.rank()), l1.clone(), l2.clone())?;
    analytic_index(&id, cfg)
}

/// Pointwise restricted inverse of σ: L₁ → L₂, fitted by a trigonometric
/// polynomial. Used when an operator carries no explicit inverse symbol.
fn fitted_inverse(sigma: &CircleSymbol, l1: &SubspaceSymbol, l2: &SubspaceSymbol, tol: f64) -> Result<CircleSymbol> {
    let grid = symbol_grid(2 * (sigma.degree() + l1.projection().degree() + l2.projection().degree()) + 16);
    let mut faces = Vec::new();
    for f in Face::BOTH {
        let samples: Vec<CMat> = grid
            .iter()
            .map(|&x| {
                let m = l2.projection().eval(f, x) * sigma.eval(f, x) * l1.projection().eval(f, x);
                m.pseudo_inverse(tol).expect("nonnegative tolerance")
            })
            .collect();
        let mut found = None;
        for d in 0..=24usize.min((grid.len() - 1) / 2) {
            let fit = TrigPoly::fit_uniform(&samples, d)?;
            let resid = grid.iter().zip(&samples).map(|(&x, s)| (fit.eval(x) - s).norm()).fold(0.0, f64::max);
            if resid < 1e-9 {
                found = Some(fit);
                break;
            }
        }
        faces.push(found.ok_or_else(|| {
            Error::Unsupported("restricted inverse of the symbol is not a trigonometric polynomial".into())
        })?);
    }
    let minus = faces.pop().expect("two faces");
    let plus = faces.pop().expect("two faces");
    CircleSymbol::new(-sigma.order(), plus, minus)
}

fn check_inverse(rho: &CircleSymbol, sigma: &CircleSymbol, p1: &CircleSymbol) -> Result<()> {
    let grid = symbol_grid(rho.degree() + sigma.degree() + p1.degree());
    let mut worst: f64 = 0.0;
    for x in grid {
        for f in Face::BOTH {
            let p = p1.eval(f, x);
            worst = worst.max(frobenius(&(rho.eval(f, x) * sigma.eval(f, x) * &p - &p)));
        }
    }
    if worst > 1e-8 {
        return Err(Error::InversionQuality(worst));
    }
    Ok(())
}

/// The ordinary elliptic operator D̃ of the index formula.
/// Even case: σ(D̃) = [α*σ]⁻¹σ ⊕ 1 on L₁ ⊕ L₁⊥, i.e. faces ρ_∓ σ_± p₁ + (1 − p₁).
/// Odd case: σ(D̃) = σ ⊕ α*σ, i.e. faces σ_± p₁,± + σ_∓ p₁,∓.
pub fn build_parity_double(op: &SubspaceOperator, parity: Parity, rank_tol: f64) -> Result<CircleOperator> {
    for (name, l) in [("source", &op.source), ("target", &op.target)] {
        if l.parity() != parity {
            return Err(Error::ParityMismatch(format!("{name} subspace is {:?}, expected {parity:?}", l.parity())));
        }
    }
    let sigma = op.symbol()?;
    let p1 = op.source.symbol().projection();
    let r1 = op.source.rank();
    match parity {
        Parity::Even => {
            let rho = match &op.inverse {
                Some(rho) => rho.clone(),
                None => fitted_inverse(&sigma, op.source.symbol(), op.target.symbol(), rank_tol)?,
            };
            check_inverse(&rho, &sigma, p1)?;
            let one = TrigPoly::identity(r1);
            let face = |f: Face| -> Result<TrigPoly> {
                let p = p1.face(f);
                let main = rho.face(f.opposite()).try_mul(sigma.face(f))?.try_mul(p)?;
                main.try_add(&one)?.try_add(&p.scale(c64(-1.0, 0.0)))
            };
            let tau = CircleSymbol::new(0, face(Face::Plus)?, face(Face::Minus)?)?;
            Ok(CircleOperator::pdo(tau))
        }
        Parity::Odd => {
            let r = p1.rows();
            let sum = p1.face(Face::Plus).try_add(p1.face(Face::Minus))?;
            if sum.grid_distance(&TrigPoly::identity(r), symbol_grid(sum.degree()).len()) > 1e3 * rank_tol {
                return Err(Error::Unsupported("odd double needs orthogonally complementary faces".into()));
            }
            let face = |f: Face| -> Result<TrigPoly> {
                let a = sigma.face(f).try_mul(p1.face(f))?;
                let b = sigma.face(f.opposite()).try_mul(p1.face(f.opposite()))?;
                a.try_add(&b)
            };
            let tau = CircleSymbol::new(sigma.order(), face(Face::Plus)?, face(Face::Minus)?)?;
            Ok(CircleOperator::pdo(tau))
        }
        Parity::Neither => Err(Error::ParityMismatch("subspaces have no parity".into())),
    }
}

/// Both sides of ind D = ½ ind D̃ + d(L̂₁) − d(L̂₂).
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaCheck {
    pub ind_d: i64,
    pub ind_dtilde: i64,
    pub d_l1: DyadicRational,
    pub d_l2: DyadicRational,
    pub residual: DyadicRational,
}

/// ind D − ½ ind D̃ − d(L̂₁) + d(L̂₂), in exact arithmetic.
pub fn index_formula_residual(op: &SubspaceOperator, cfg: &IndexConfig) -> Result<FormulaCheck> {
    let tol = op.source.tolerances();
    let ind_d = analytic_index(op, cfg)?;
    let dt = build_parity_double(op, Parity::Even, cfg.rank_tol)?;
    let ind_dtilde = ordinary_index(&dt, cfg, tol)?;
    let d_l1 = crate::eta::dimension_functional(&op.source, cfg)?;
    let d_l2 = crate::eta::dimension_functional(&op.target, cfg)?;
    let residual = DyadicRational::integer(ind_d) - DyadicRational::new(ind_dtilde, 1) - d_l1 + d_l2;
    Ok(FormulaCheck { ind_d, ind_dtilde, d_l1, d_l2, residual })
}

/// One line of an index-formula report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub example_id: String,
    #[serde(rename = "ind_D")]
    pub ind_d: i64,
    #[serde(rename = "ind_Dtilde")]
    pub ind_dtilde: i64,
    #[serde(rename = "d_L1")]
    pub d_l1: String,
    #[serde(rename = "d_L2")]
    pub d_l2: String,
    pub residual: String,
}

impl IndexRow {
    pub fn new(example_id: impl Into<String>, c: &FormulaCheck) -> Self {
        IndexRow {
            example_id: example_id.into(),
            ind_d: c.ind_d,
            ind_dtilde: c.ind_dtilde,
            d_l1: c.d_l1.to_string(),
            d_l2: c.d_l2.to_string(),
            residual: c.residual.to_string(),
        }
    }
}
