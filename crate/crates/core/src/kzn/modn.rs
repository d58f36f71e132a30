use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::KClassZn;
use crate::circle::{CircleOperator, CircleSymbol, Face};
use crate::error::{Error, Result};
use crate::index::{analytic_index, IndexConfig, SubspaceOperator};
use crate::numeric::{c64, winding_number, CMat, DyadicRational, ToleranceConfig, TrigPoly};
use crate::subspaces::{direct_sum, lift_symbol, repeat, transport_frame, PdoSubspace};

/// Orthonormal frames of L on both faces: the frame columns for framed
/// subspaces, transported frames otherwise.
pub fn face_frames(l: &PdoSubspace, rank_tol: f64) -> Result<[TrigPoly; 2]> {
    if let Some(f) = l.as_framed() {
        return Ok([f.face_frame(Face::Plus), f.face_frame(Face::Minus)]);
    }
    let p = l.symbol().projection();
    Ok([transport_frame(p.face(Face::Plus), rank_tol)?.0, transport_frame(p.face(Face::Minus), rank_tol)?.0])
}

/// w(det σ₊(1 ⊗ u₊)) − w(det σ₋(1 ⊗ u₋)) for σ: copies·L → F. Replacing the
/// frames changes the value by a multiple of `copies`.
pub fn winding_datum(sigma: &CircleSymbol, base: &PdoSubspace, copies: usize, rank_tol: f64) -> Result<i64> {
    if sigma.cols() != copies * base.rank() {
        return Err(Error::Structural(format!(
            "symbol has {} columns, {copies} copies of rank {} expected",
            sigma.cols(),
            base.rank()
        )));
    }
    let frames = face_frames(base, rank_tol)?;
    let mut w = [0i64; 2];
    for (slot, f) in Face::BOTH.into_iter().enumerate() {
        let u = TrigPoly::block_diag(&vec![frames[slot].clone(); copies]);
        let g = sigma.face(f).try_mul(&u)?;
        if g.rows() != g.cols() {
            return Err(Error::Ellipticity(format!(
                "symbol maps a rank {} bundle to rank {} on face {f:?}",
                g.cols(),
                g.rows()
            )));
        }
        w[slot] = winding_number(&g, rank_tol)?;
    }
    Ok(w[0] - w[1])
}

/// [σ] ∈ K(T*S¹; ℤ_n) for σ: nL → π*F. Over the circle the composite
/// π*F → nL → γ_n ⊗ nL → γ_n ⊗ π*F is classified by the winding datum of σ,
/// read modulo n.
pub fn difference_construction_zn(sigma: &CircleSymbol, base: &PdoSubspace, n: u64, rank_tol: f64) -> Result<KClassZn> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let datum = winding_datum(sigma, base, n as usize, rank_tol)?;
    KClassZn::new(n, 0, datum)
}

static CALIBRATION: OnceLock<std::result::Result<i64, Error>> = OnceLock::new();

/// e^{ix} ⊕ 1 ⊕ … on face +, identity on face −, acting on n copies of the
/// trivial line.
pub fn shift_generator(n: u64, tol: ToleranceConfig) -> Result<ModNOperator> {
    let k = n as usize;
    let mut e = CMat::zeros(k, k);
    e[(0, 0)] = c64(1.0, 0.0);
    let mut d = CMat::identity(k, k);
    d[(0, 0)] = c64(0.0, 0.0);
    let plus = TrigPoly::from_terms(k, k, [(0, d), (1, e)])?;
    let sym = CircleSymbol::new(0, plus, TrigPoly::identity(k))?;
    ModNOperator::new(Arc::new(PdoSubspace::full(1, tol)), n, CircleOperator::pdo(sym))
}

fn calibrate() -> Result<i64> {
    let tol = ToleranceConfig::default();
    let gen = shift_generator(4, tol)?;
    let ind = analytic_index(gen.operator(), &IndexConfig::default())?;
    let datum = winding_datum(&gen.operator().symbol()?, &gen.base, 4, tol.rank_tol)?;
    match (ind, datum) {
        (i, d) if d != 0 && i == d => Ok(1),
        (i, d) if d != 0 && i == -d => Ok(-1),
        (i, d) => Err(Error::Internal(format!("shift generator has index {i} and datum {d}"))),
    }
}

/// The orientation sign s of p₌! on the circle, fixed once by the shift
/// generator and shared by every caller.
pub fn calibration_sign() -> Result<i64> {
    CALIBRATION.get_or_init(calibrate).clone()
}

/// p₌!(c) = s·(torsion part) mod n.
pub fn direct_image_s1(c: &KClassZn) -> Result<u64> {
    let s = calibration_sign()?;
    Ok((s * c.torsion_part as i64).rem_euclid(c.n as i64) as u64)
}

/// For each position of the interleaved order (part₀, part₁, …) × n, its
/// position in the grouped order part₀ × n, part₁ × n, ….
pub fn interleave_permutation(n: usize, ranks: &[usize]) -> Vec<usize> {
    let total: usize = ranks.iter().sum();
    let mut out = Vec::with_capacity(n * total);
    for c in 0..n {
        let mut grouped_base = 0;
        for &r in ranks {
            for i in 0..r {
                out.push(grouped_base + c * r + i);
            }
            grouped_base += n * r;
        }
    }
    out
}

/// Constant operator sending coordinate j to coordinate perm[j].
pub fn permutation_operator(perm: &[usize]) -> CircleOperator {
    let k = perm.len();
    let mut m = CMat::zeros(k, k);
    for (j, &p) in perm.iter().enumerate() {
        m[(p, j)] = c64(1.0, 0.0);
    }
    CircleOperator::pdo(CircleSymbol::even(0, TrigPoly::constant(m)))
}

/// D: nL̂ → C∞(F).
#[derive(Clone, Debug)]
pub struct ModNOperator {
    base: Arc<PdoSubspace>,
    n: u64,
    op: SubspaceOperator,
}

impl ModNOperator {
    pub fn new(base: Arc<PdoSubspace>, n: u64, op: CircleOperator) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        let tol = base.tolerances();
        let source = Arc::new(repeat(&base, n as usize)?);
        let target = Arc::new(PdoSubspace::full(op.rows_rank(), tol));
        let op = SubspaceOperator::new(op, source, target)?;
        Ok(ModNOperator { base, n, op })
    }

    pub fn base(&self) -> &Arc<PdoSubspace> {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn operator(&self) -> &SubspaceOperator {
        &self.op
    }

    pub fn class(&self, rank_tol: f64) -> Result<KClassZn> {
        difference_construction_zn(&self.op.symbol()?, &self.base, self.n, rank_tol)
    }

    /// D ⊕ D′ ⊕ … ⊕ D′ (n copies of D′: L̂′ → C∞(F′)), seen as an operator on
    /// n(L̂ ⊕ L̂′).
    pub fn with_trivial(&self, extra: &SubspaceOperator) -> Result<Self> {
        let tgt = extra.target().symbol();
        if tgt.face_rank(Face::Plus) != extra.target().rank() || tgt.face_rank(Face::Minus) != extra.target().rank() {
            return Err(Error::Structural("the added operator must map into a full section space".into()));
        }
        let n = self.n as usize;
        let base = Arc::new(direct_sum(&[self.base.clone(), extra.source().clone()])?);
        let mut blocks = vec![self.op.operator().clone()];
        blocks.extend(std::iter::repeat_n(extra.operator().clone(), n));
        let perm = interleave_permutation(n, &[self.base.rank(), extra.source().rank()]);
        let op = CircleOperator::BlockDiag(blocks).compose(permutation_operator(&perm));
        ModNOperator::new(base, self.n, op)
    }

    pub fn perturbed(&self, delta: CircleOperator) -> Result<Self> {
        Ok(ModNOperator { op: self.op.with_operator(self.op.operator().clone().plus(delta))?, ..self.clone() })
    }
}

/// ind D mod n.
pub fn mod_n_analytic_index(d: &ModNOperator, cfg: &IndexConfig) -> Result<u64> {
    let ind = analytic_index(&d.op, cfg)?;
    Ok(ind.rem_euclid(d.n as i64) as u64)
}

/// True iff α*σ carries the face-exchanged windings of σ and the opposite
/// winding datum.
pub fn antipodal_action_check(sigma: &CircleSymbol, rank_tol: f64) -> Result<bool> {
    let wp = winding_number(sigma.face(Face::Plus), rank_tol)?;
    let wm = winding_number(sigma.face(Face::Minus), rank_tol)?;
    let a = sigma.antipodal();
    let ap = winding_number(a.face(Face::Plus), rank_tol)?;
    let am = winding_number(a.face(Face::Minus), rank_tol)?;
    Ok(ap == wm && am == wp && ap - am == -(wp - wm))
}

/// {d(L̂)} read off the ℤ_{2^{N+1}} class of σ ⊕ α*σ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalEta {
    pub value: DyadicRational,
    pub modulus: u64,
    pub residue: u64,
    pub lift_order: u32,
}

fn doubled_lift(l: &PdoSubspace, rank_tol: f64) -> Result<(CircleSymbol, u32)> {
    let lift = lift_symbol(l.symbol(), rank_tol)?;
    let sigma = lift.sigma();
    Ok((CircleSymbol::block_diag(&[sigma.clone(), sigma.antipodal()])?, lift.order()))
}

/// p₌![σ ⊕ α*σ] / 2^{N+1} in ℤ[1/2]/ℤ.
pub fn fractional_eta_topological(l: &Arc<PdoSubspace>, cfg: &IndexConfig) -> Result<FractionalEta> {
    let (doubled, order) = doubled_lift(l, cfg.rank_tol)?;
    let modulus = 1u64 << (order + 1);
    let class = difference_construction_zn(&doubled, l, modulus, cfg.rank_tol)?;
    let residue = direct_image_s1(&class)?;
    let value = DyadicRational::new(residue as i64, order + 1).fractional_part();
    Ok(FractionalEta { value, modulus, residue, lift_order: order })
}

/// The same quantity from the analytic mod 2^{N+1} index of σ̂ ⊕ α*σ̂.
pub fn fractional_eta_analytic(l: &Arc<PdoSubspace>, cfg: &IndexConfig) -> Result<FractionalEta> {
    let (doubled, order) = doubled_lift(l, cfg.rank_tol)?;
    let modulus = 1u64 << (order + 1);
    let d = ModNOperator::new(l.clone(), modulus, CircleOperator::pdo(doubled))?;
    let residue = mod_n_analytic_index(&d, cfg)?;
    let value = DyadicRational::new(residue as i64, order + 1).fractional_part();
    Ok(FractionalEta { value, modulus, residue, lift_order: order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaving_is_a_permutation() {
        let p = interleave_permutation(3, &[2, 1]);
        let mut s = p.clone();
        s.sort();
        assert_eq!(s, (0..9).collect::<Vec<_>>());
        assert_eq!(p, vec![0, 1, 6, 2, 3, 7, 4, 5, 8]);
    }

    #[test]
    fn calibration_is_negative() {
        assert_eq!(calibration_sign().unwrap(), -1);
    }

    #[test]
    fn shift_generator_mod_four() {
        let tol = ToleranceConfig::default();
        let g = shift_generator(4, tol).unwrap();
        let c = g.class(tol.rank_tol).unwrap();
        assert_eq!(direct_image_s1(&c).unwrap(), 3);
        assert_eq!(mod_n_analytic_index(&g, &IndexConfig::default()).unwrap(), 3);
    }
}
