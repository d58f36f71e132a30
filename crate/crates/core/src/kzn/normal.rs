use std::sync::Arc;

use super::{interleave_permutation, permutation_operator, ModNOperator};
use crate::circle::{symbol_grid, CircleOperator, CircleSymbol, Face};
use crate::error::{Error, Result};
use crate::index::{analytic_index, IndexConfig, SubspaceOperator};
use crate::numeric::{c64, frobenius, CMat, TrigPoly};
use crate::subspaces::{direct_sum, orthocomplement, repeat, rotation_homotopy, PdoSubspace, SubspaceSymbol};

/// D: nL̂₁ ⊕ C∞(E₁) → nL̂₂ ⊕ C∞(F₁). Without L̂₂ the target is C∞(F₁).
#[derive(Clone, Debug)]
pub struct EllZnElement {
    n: u64,
    l1: Arc<PdoSubspace>,
    e1: usize,
    l2: Option<Arc<PdoSubspace>>,
    f1: usize,
    op: CircleOperator,
}

fn sum_with_full(l: &Arc<PdoSubspace>, n: u64, extra: usize) -> Result<Arc<PdoSubspace>> {
    let rep = Arc::new(repeat(l, n as usize)?);
    if extra == 0 {
        return Ok(rep);
    }
    let full = Arc::new(PdoSubspace::full(extra, l.tolerances()));
    Ok(Arc::new(direct_sum(&[rep, full])?))
}

impl EllZnElement {
    pub fn new(
        n: u64,
        l1: Arc<PdoSubspace>,
        e1: usize,
        l2: Option<Arc<PdoSubspace>>,
        f1: usize,
        op: CircleOperator,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        let r2 = l2.as_ref().map_or(0, |l| l.rank());
        let (cols, rows) = (n as usize * l1.rank() + e1, n as usize * r2 + f1);
        if op.cols_rank() != cols || op.rows_rank() != rows {
            return Err(Error::Structural(format!(
                "operator is {}x{}, blocks need {rows}x{cols}",
                op.rows_rank(),
                op.cols_rank()
            )));
        }
        if l2.is_none() && f1 == 0 {
            return Err(Error::Structural("target is empty".into()));
        }
        Ok(EllZnElement { n, l1, e1, l2, f1, op })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn operator(&self) -> &CircleOperator {
        &self.op
    }

    /// Shape nL̂′ → C∞(F′).
    pub fn is_simple(&self) -> bool {
        self.e1 == 0 && self.l2.is_none()
    }

    pub fn subspace_operator(&self) -> Result<SubspaceOperator> {
        let source = sum_with_full(&self.l1, self.n, self.e1)?;
        let target = match &self.l2 {
            Some(l2) => sum_with_full(l2, self.n, self.f1)?,
            None => Arc::new(PdoSubspace::full(self.f1, self.l1.tolerances())),
        };
        SubspaceOperator::new(self.op.clone(), source, target)
    }

    pub fn mod_n_index(&self, cfg: &IndexConfig) -> Result<u64> {
        let ind = analytic_index(&self.subspace_operator()?, cfg)?;
        Ok(ind.rem_euclid(self.n as i64) as u64)
    }

    /// The simple shape as an operator nL̂′ → C∞(F′).
    pub fn as_mod_n(&self) -> Result<ModNOperator> {
        if !self.is_simple() {
            return Err(Error::Structural("element is not in normal form".into()));
        }
        ModNOperator::new(self.l1.clone(), self.n, self.op.clone())
    }
}

/// Result of the two normal-form reductions.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub element: EllZnElement,
    /// largest ‖P_φ² − P_φ‖ along the rotation of (L₂, L₂⊥) onto (E₂, 0)
    pub projection_defect: f64,
}

fn identity_block(r: usize) -> CircleOperator {
    CircleOperator::identity(r)
}

fn constant_op(m: CMat) -> CircleOperator {
    CircleOperator::pdo(CircleSymbol::even(0, TrigPoly::constant(m)))
}

/// Rotation P_φ for the symbol of L̂₂ on 50 angles and a grid of points.
fn rotation_defect(l2: &SubspaceSymbol, tol: f64) -> Result<f64> {
    let p = l2.projection();
    let mut worst: f64 = 0.0;
    for x in symbol_grid(p.degree()).into_iter().step_by(4) {
        for f in Face::BOTH {
            let pf = p.eval(f, x);
            for k in 0..50 {
                let phi = std::f64::consts::FRAC_PI_2 * k as f64 / 49.0;
                let q = rotation_homotopy(&pf, phi, tol)?;
                worst = worst.max((&q * &q - &q).norm());
            }
        }
    }
    Ok(worst)
}

/// Stable homotopy to the shape nL̂′ → C∞(F′): C∞(E₁) is absorbed by adding
/// the identity on (n−1)C∞(E₁), and L̂₂ is removed by adjoining the identity
/// on nL̂₂⊥ and identifying nL̂₂ ⊕ nL̂₂⊥ with C∞(nE₂).
pub fn normal_form(e: &EllZnElement, rank_tol: f64) -> Result<NormalForm> {
    let n = e.n as usize;
    let mut cur = e.clone();
    let mut projection_defect: f64 = 0.0;
    if cur.e1 > 0 {
        let tol = cur.l1.tolerances();
        let l1 = Arc::new(direct_sum(&[cur.l1.clone(), Arc::new(PdoSubspace::full(cur.e1, tol))])?);
        let perm = interleave_permutation(n, &[cur.l1.rank(), cur.e1]);
        let padded = CircleOperator::BlockDiag(vec![cur.op.clone(), identity_block((n - 1) * cur.e1)]);
        let op = padded.compose(permutation_operator(&perm));
        cur = EllZnElement::new(e.n, l1, 0, cur.l2.clone(), cur.f1 + (n - 1) * cur.e1, op)?;
    }
    if let Some(l2) = cur.l2.clone() {
        projection_defect = rotation_defect(l2.symbol(), rank_tol.sqrt())?;
        let rep = repeat(&l2, n)?;
        let proj = rep
            .as_framed()
            .ok_or_else(|| Error::Unsupported("target subspace needs an explicit frame".into()))?
            .projection_operator()?;
        let r2 = n * l2.rank();
        let p_t = if cur.f1 > 0 { CircleOperator::BlockDiag(vec![proj, identity_block(cur.f1)]) } else { proj };
        let perp = Arc::new(orthocomplement(&l2)?);
        let l1 = Arc::new(direct_sum(&[cur.l1.clone(), perp])?);
        let perm = interleave_permutation(n, &[cur.l1.rank(), l2.rank()]);
        let inner = CircleOperator::BlockDiag(vec![p_t.compose(cur.op.clone()), identity_block(r2)]);
        let rows = r2 + cur.f1;
        let mut s = CMat::zeros(rows, rows + r2);
        for i in 0..rows {
            s[(i, i)] = c64(1.0, 0.0);
        }
        for i in 0..r2 {
            s[(i, rows + i)] = c64(1.0, 0.0);
        }
        let op = constant_op(s).compose(inner).compose(permutation_operator(&perm));
        cur = EllZnElement::new(e.n, l1, 0, None, rows, op)?;
    }
    Ok(NormalForm { element: cur, projection_defect })
}

/// Blocks of σ: nL → F and of its inverse ρ: F → nL.
#[derive(Clone, Debug)]
pub struct RowDecomposition {
    /// σᵢ: L → F, the i-th block column
    pub columns: Vec<CircleSymbol>,
    /// σ^i: F → L, the i-th block row of ρ
    pub rows: Vec<CircleSymbol>,
    /// q = σ₁σ¹
    pub q: CircleSymbol,
    /// max ‖Σσᵢσ^i − 1‖ on the grid
    pub sum_residual: f64,
    /// max ‖σ^iσⱼ − δ p‖ on the grid
    pub delta_residual: f64,
    /// max ‖q² − q‖ on the grid
    pub idempotency: f64,
}

pub fn inverse_row_decomposition(
    sigma: &CircleSymbol,
    rho: &CircleSymbol,
    l: &SubspaceSymbol,
    n: usize,
    tol: f64,
) -> Result<RowDecomposition> {
    let r = l.rank();
    if sigma.cols() != n * r || rho.rows() != n * r || rho.cols() != sigma.rows() {
        return Err(Error::Structural("σ and ρ must map between n·E and F".into()));
    }
    let block = |i: usize| (i * r..(i + 1) * r).collect::<Vec<_>>();
    let columns: Vec<CircleSymbol> =
        (0..n).map(|i| sigma.map_faces(|_, t| Ok(t.select_columns(&block(i))))).collect::<Result<_>>()?;
    let rows: Vec<CircleSymbol> =
        (0..n).map(|i| rho.map_faces(|_, t| Ok(t.select_rows(&block(i))))).collect::<Result<_>>()?;
    let q = columns[0].compose(&rows[0])?;
    let p = l.projection();
    let fr = sigma.rows();
    let degree = sigma.degree() + rho.degree() + p.degree();
    let (mut sum_residual, mut delta_residual, mut idempotency) = (0.0f64, 0.0f64, 0.0f64);
    for x in symbol_grid(degree) {
        for f in Face::BOTH {
            let cs: Vec<CMat> = columns.iter().map(|c| c.eval(f, x)).collect();
            let rs: Vec<CMat> = rows.iter().map(|c| c.eval(f, x)).collect();
            let pf = p.eval(f, x);
            let mut total = CMat::zeros(fr, fr);
            for (c, rr) in cs.iter().zip(&rs) {
                total += c * rr;
            }
            sum_residual = sum_residual.max(frobenius(&(total - CMat::identity(fr, fr))));
            for (i, rr) in rs.iter().enumerate() {
                for (j, c) in cs.iter().enumerate() {
                    let target = if i == j { pf.clone() } else { CMat::zeros(r, r) };
                    delta_residual = delta_residual.max(frobenius(&(rr * c * &pf - target)));
                }
            }
            let qf = q.eval(f, x);
            idempotency = idempotency.max(frobenius(&(&qf * &qf - &qf)));
            let rank_q = qf.trace().re;
            if (rank_q - pf.trace().re).abs() > 1e-6 {
                return Err(Error::InversionQuality((rank_q - pf.trace().re).abs()));
            }
        }
    }
    let worst = sum_residual.max(delta_residual).max(idempotency);
    if worst > tol {
        return Err(Error::InversionQuality(worst));
    }
    Ok(RowDecomposition { columns, rows, q, sum_residual, delta_residual, idempotency })
}
