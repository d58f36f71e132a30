//! Seeded example generators shared by tests, benches and the command line.
//! Every generator draws from a ChaCha stream, so a seed fixes the examples.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{CircleOperator, CircleSymbol, Face, FiniteBlock, Window};
use crate::error::{Error, Result};
use crate::index::{IndexConfig, SubspaceOperator};
use crate::kzn::{EllZnElement, ModNOperator};
use crate::numeric::{c64, CMat, ToleranceConfig, TrigPoly};
use crate::subspaces::{
    image_subspace, lift_symbol, realize_projection, CoordinateSet, EvenInvertible, FramedSubspace, PdoSubspace,
    SubspaceSymbol,
};

pub type SuiteRng = ChaCha8Rng;

/// Stream for a seed and a named purpose, so suites do not share draws.
pub fn rng(seed: u64, stream: u64) -> SuiteRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn random_matrix(rng: &mut SuiteRng, rows: usize, cols: usize, scale: f64) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c64(rng.random_range(-1.0..1.0) * scale, rng.random_range(-1.0..1.0) * scale))
}

/// Q factor of a random complex matrix.
pub fn random_unitary(rng: &mut SuiteRng, r: usize) -> CMat {
    loop {
        let a = random_matrix(rng, r, r, 1.0);
        let qr = a.qr();
        if qr.r().diagonal().iter().all(|d| d.norm() > 1e-3) {
            return qr.q();
        }
    }
}

/// Q₁ diag(e^{ik_j x}) Q₂ with |k_j| ≤ degree.
pub fn unitary_loop(rng: &mut SuiteRng, r: usize, degree: i64) -> TrigPoly {
    let q1 = random_unitary(rng, r);
    let q2 = random_unitary(rng, r);
    let mut terms: Vec<(i64, CMat)> = Vec::new();
    for j in 0..r {
        let k = rng.random_range(-degree..=degree);
        let mut e = CMat::zeros(r, r);
        e[(j, j)] = c64(1.0, 0.0);
        terms.push((k, &q1 * e * &q2));
    }
    TrigPoly::from_terms(r, r, terms).expect("square terms").trimmed()
}

pub fn finite_block(rng: &mut SuiteRng, radius: i64, rows: usize, cols: usize, scale: f64) -> FiniteBlock {
    let w = Window::symmetric(radius);
    let m = random_matrix(rng, w.dim(rows), w.dim(cols), scale);
    FiniteBlock::new(radius, rows, cols, m).expect("window-sized block")
}

/// M_g(I + J) with g a unitary loop and J small enough to keep I + J invertible.
pub fn even_invertible(rng: &mut SuiteRng, r: usize, tol: ToleranceConfig) -> Result<EvenInvertible> {
    let g = unitary_loop(rng, r, 1);
    let dim = Window::symmetric(1).dim(r) as f64;
    let j = finite_block(rng, 1, r, r, 0.3 / dim);
    EvenInvertible::new(g, Some(j), tol.rank_tol.sqrt())
}

fn random_mask(rng: &mut SuiteRng, r: usize, count: usize) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..r).collect();
    for i in (1..r).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    let mut m = vec![false; r];
    for &i in idx.iter().take(count) {
        m[i] = true;
    }
    m
}

fn random_flips(rng: &mut SuiteRng, r: usize) -> Vec<(i64, usize)> {
    let k = rng.random_range(0..=2);
    (0..k).map(|_| (rng.random_range(-2..=2), rng.random_range(0..r))).collect()
}

/// Framed subspace with the same coordinate mask on both faces.
pub fn even_framed(rng: &mut SuiteRng, r: usize, tol: ToleranceConfig) -> Result<PdoSubspace> {
    let count = rng.random_range(1..r.max(2));
    let coords = CoordinateSet::even(random_mask(rng, r, count)).with_flips(random_flips(rng, r))?;
    framed_with(rng, coords, tol)
}

/// Framed subspace whose face masks differ but have equal size.
pub fn generic_framed(rng: &mut SuiteRng, r: usize, tol: ToleranceConfig) -> Result<PdoSubspace> {
    let count = rng.random_range(1..=r);
    let plus = random_mask(rng, r, count);
    let minus = random_mask(rng, r, count);
    let coords = CoordinateSet::new(plus, minus, Default::default())?.with_flips(random_flips(rng, r))?;
    framed_with(rng, coords, tol)
}

fn framed_with(rng: &mut SuiteRng, coords: CoordinateSet, tol: ToleranceConfig) -> Result<PdoSubspace> {
    let r = coords.rank();
    let w = unitary_loop(rng, r, 1);
    let k = if rng.random_bool(0.5) {
        let dim = Window::symmetric(1).dim(r) as f64;
        Some(finite_block(rng, 1, r, r, 0.3 / dim))
    } else {
        None
    };
    PdoSubspace::framed(FramedSubspace::new(w, k, coords, tol.rank_tol.sqrt())?, tol)
}

/// Unitary loop whose first column spans the line of v(x) = (cos x/2, sin x/2):
/// [[(1+z)/2, i(z−1)/2], [−i(z−1)/2, (1+z)/2]] with z = e^{ix}.
pub fn mobius_frame() -> TrigPoly {
    let h = 0.5;
    let c0 = CMat::from_row_slice(2, 2, &[c64(h, 0.0), c64(0.0, -h), c64(0.0, h), c64(h, 0.0)]);
    let c1 = CMat::from_row_slice(2, 2, &[c64(h, 0.0), c64(0.0, h), c64(0.0, -h), c64(h, 0.0)]);
    TrigPoly::from_terms(2, 2, [(0, c0), (1, c1)]).expect("2x2 terms")
}

/// The even symbol v vᵀ, realized with the explicit frame above.
pub fn mobius_framed(tol: ToleranceConfig) -> Result<PdoSubspace> {
    let coords = CoordinateSet::even(vec![true, false]);
    PdoSubspace::framed(FramedSubspace::new(mobius_frame(), None, coords, tol.rank_tol.sqrt())?, tol)
}

/// p(x) = v(x)v(x)ᵀ = ½[[1 + cos x, sin x], [sin x, 1 − cos x]].
pub fn mobius_symbol(tol: ToleranceConfig) -> Result<SubspaceSymbol> {
    let h = c64(0.5, 0.0);
    let q = c64(0.25, 0.0);
    let c0 = CMat::from_row_slice(2, 2, &[h, c64(0.0, 0.0), c64(0.0, 0.0), h]);
    let c1 = CMat::from_row_slice(2, 2, &[q, c64(0.0, -0.25), c64(0.0, -0.25), -q]);
    let cm1 = CMat::from_row_slice(2, 2, &[q, c64(0.0, 0.25), c64(0.0, 0.25), -q]);
    let p = TrigPoly::from_terms(2, 2, [(-1, cm1), (0, c0), (1, c1)])?;
    SubspaceSymbol::new(CircleSymbol::even(0, p), tol.rank_tol)
}

/// The same symbol realized by spectral cuts of its quantization.
pub fn mobius_cut(tol: ToleranceConfig) -> Result<PdoSubspace> {
    realize_projection(&mobius_symbol(tol)?, 8, tol)
}

/// Even subspaces of structurally different kinds.
pub fn even_subspace_suite(seed: u64, tol: ToleranceConfig) -> Result<Vec<(String, Arc<PdoSubspace>)>> {
    let mut g = rng(seed, 1);
    let mut out: Vec<(String, Arc<PdoSubspace>)> = vec![
        ("full_rank2".into(), Arc::new(PdoSubspace::full(2, tol))),
        (
            "full_minus_mode".into(),
            Arc::new(PdoSubspace::coordinate(CoordinateSet::full(1).with_flips([(0, 0)])?, tol)),
        ),
        ("mobius_framed".into(), Arc::new(mobius_framed(tol)?)),
        ("mobius_cut".into(), Arc::new(mobius_cut(tol)?)),
    ];
    for i in 0..3 {
        let r = 2 + i % 2;
        out.push((format!("framed_random_{i}"), Arc::new(even_framed(&mut g, r, tol)?)));
    }
    Ok(out)
}

/// Square symbol with independent unitary loops on the two faces.
pub fn elliptic_symbol(rng: &mut SuiteRng, r: usize, degree: i64) -> CircleSymbol {
    let plus = unitary_loop(rng, r, degree);
    let minus = unitary_loop(rng, r, degree);
    CircleSymbol::new(0, plus, minus).expect("same shape")
}

/// Random D: nL̂ → C∞(F) with σ_± = V_± diag(e^{ik x}) (1 ⊗ u_±)* on a random
/// framed L̂, plus a smoothing block.
pub fn modn_operator(rng: &mut SuiteRng, n: u64, tol: ToleranceConfig) -> Result<ModNOperator> {
    // rank-2 bases at n = 8 give 16-dimensional fibres; kept to rank 1 there
    let r = if n >= 8 { 1 } else { rng.random_range(1..=2usize) };
    let base = Arc::new(generic_framed(rng, r, tol)?);
    let frames = crate::kzn::face_frames(&base, tol.rank_tol)?;
    let copies = n as usize;
    let k = frames[0].cols();
    let f = copies * k;
    let mut faces = Vec::new();
    for (slot, _face) in Face::BOTH.into_iter().enumerate() {
        let v = unitary_loop(rng, f, 1);
        let u = TrigPoly::block_diag(&vec![frames[slot].clone(); copies]);
        faces.push(v.try_mul(&u.adjoint())?);
    }
    let minus = faces.pop().expect("two faces");
    let plus = faces.pop().expect("two faces");
    let sym = CircleSymbol::new(0, plus, minus)?;
    let op = CircleOperator::pdo(sym).plus(CircleOperator::Local(finite_block(rng, 1, f, copies * r, 0.5)));
    ModNOperator::new(base, n, op)
}

/// Lower-order and smoothing perturbation for an operator between ranks.
pub fn perturbation(rng: &mut SuiteRng, rows: usize, cols: usize) -> CircleOperator {
    let lower = CircleSymbol::new(
        -1,
        TrigPoly::constant(random_matrix(rng, rows, cols, 1.0)),
        TrigPoly::constant(random_matrix(rng, rows, cols, 1.0)),
    )
    .expect("same shape");
    CircleOperator::pdo(lower).plus(CircleOperator::Local(finite_block(rng, 2, rows, cols, 1.0)))
}

/// e^{ikx} as an even symbol on the trivial line.
pub fn exponential(k: i64) -> TrigPoly {
    TrigPoly::monomial(k, CMat::identity(1, 1))
}

fn random_loop(rng: &mut SuiteRng, rows: usize, cols: usize) -> TrigPoly {
    let terms: Vec<(i64, CMat)> = (-1..=1).map(|k| (k, random_matrix(rng, rows, cols, 1.0))).collect();
    TrigPoly::from_terms(rows, cols, terms).expect("shape-consistent terms")
}

/// Random D: nL̂₁ ⊕ C∞(E₁) → nL̂₂ ⊕ C∞(F₁) with matching fibre dimensions,
/// redrawn until its restricted symbol is invertible.
pub fn ell_zn_element(rng: &mut SuiteRng, tol: ToleranceConfig) -> Result<EllZnElement> {
    loop {
        let n = rng.random_range(2..=3u64);
        let nu = n as usize;
        let r1 = rng.random_range(1..=2);
        let l1 = Arc::new(generic_framed(rng, r1, tol)?);
        let with_target = rng.random_bool(0.7);
        let e1 = rng.random_range(0..=1usize);
        let k1 = l1.symbol().face_rank(Face::Plus);
        let (l2, k2) = if with_target {
            let r2 = rng.random_range(1..=2);
            let l2 = Arc::new(generic_framed(rng, r2, tol)?);
            let k2 = l2.symbol().face_rank(Face::Plus);
            (Some(l2), k2)
        } else {
            (None, 0)
        };
        let total = (nu * k1 + e1) as i64 - (nu * k2) as i64;
        if total < 0 || (l2.is_none() && total == 0) {
            continue;
        }
        let f1 = total as usize;
        let cols = nu * l1.rank() + e1;
        let rows = nu * l2.as_ref().map_or(0, |l| l.rank()) + f1;
        let plus = random_loop(rng, rows, cols);
        let minus = random_loop(rng, rows, cols);
        let op = CircleOperator::pdo(CircleSymbol::new(0, plus, minus)?);
        let e = EllZnElement::new(n, l1, e1, l2, f1, op)?;
        let report = e.subspace_operator()?.ellipticity(tol.rank_tol)?;
        if !report.elliptic || report.min_singular <= 0.05 {
            continue;
        }
        // nearly degenerate draws have kernels with long tails that only
        // settle beyond the default truncation scales
        if e.mod_n_index(&IndexConfig::default()).is_ok() {
            return Ok(e);
        }
    }
}

/// The trivial line with the modes 0..k removed.
pub fn full_minus_modes(k: i64, tol: ToleranceConfig) -> Result<Arc<PdoSubspace>> {
    let c = CoordinateSet::full(1).with_flips((0..k).map(|m| (m, 0)))?;
    Ok(Arc::new(PdoSubspace::coordinate(c, tol)))
}

/// A subspace with the same symbol as a suite member, differing from it in
/// finitely many modes (framed members) or in its realization (spectral cut).
pub fn relative_partner(name: &str, l: &Arc<PdoSubspace>, tol: ToleranceConfig) -> Result<Arc<PdoSubspace>> {
    if let Some(f) = l.as_framed() {
        let coords = f.coords().clone().with_flips([(6, 0), (-7, 0), (9, 0)])?;
        let g = FramedSubspace::new(f.multiplier().clone(), f.smoothing().cloned(), coords, tol.rank_tol.sqrt())?;
        return Ok(Arc::new(PdoSubspace::framed(g, tol)?));
    }
    if name == "mobius_cut" {
        return Ok(Arc::new(mobius_framed(tol)?));
    }
    Err(Error::Unsupported(format!("no partner for {name}")))
}

/// Operators in even subspaces of different kinds, for the index formula.
pub fn index_formula_examples(rng: &mut SuiteRng, tol: ToleranceConfig) -> Result<Vec<(String, SubspaceOperator)>> {
    let mut out: Vec<(String, SubspaceOperator)> = Vec::new();
    let exp_op = |k| CircleOperator::pdo(CircleSymbol::even(0, exponential(k)));

    let l = Arc::new(even_framed(rng, 2, tol)?);
    out.push(("identity".into(), SubspaceOperator::new(CircleOperator::identity(2), l.clone(), l.clone())?));

    let full = Arc::new(PdoSubspace::full(1, tol));
    out.push(("shift".into(), SubspaceOperator::new(exp_op(1), full.clone(), full.clone())?));
    let cut = full_minus_modes(2, tol)?;
    out.push(("finite_codimension".into(), SubspaceOperator::new(CircleOperator::identity(1), full.clone(), cut)?));

    let z = CircleOperator::pdo(CircleSymbol::even(0, TrigPoly::monomial(1, CMat::identity(2, 2))));
    out.push(("shift_in_subspace".into(), SubspaceOperator::new(z, l.clone(), l)?));

    // σ_± = ±e₁* on the line spanned by e₁, so the parity double has symbol −1 ⊕ 1
    let line = CoordinateSet::even(vec![true, false]).with_flips([(1, 0), (-1, 1)])?;
    let line = Arc::new(PdoSubspace::coordinate(line, tol));
    let e1 = CMat::from_row_slice(1, 2, &[c64(1.0, 0.0), c64(0.0, 0.0)]);
    let sigma = CircleSymbol::new(0, TrigPoly::constant(e1.clone()), TrigPoly::constant(-e1))?;
    let trivial = SubspaceOperator::new(CircleOperator::pdo(sigma.clone()), line, full)?.with_inverse(sigma.adjoint());
    out.push(("sign_trivialization".into(), trivial));

    let m = Arc::new(mobius_framed(tol)?);
    let lift = lift_symbol(m.symbol(), tol.rank_tol)?;
    let target = Arc::new(PdoSubspace::full(lift.f_rank(), tol));
    let lifted =
        SubspaceOperator::new(CircleOperator::pdo(lift.sigma()), m, target)?.with_inverse(lift.restricted_inverse());
    out.push(("mobius_lift".into(), lifted));

    let l1 = Arc::new(generic_framed(rng, 2, tol)?);
    let u1 = even_invertible(rng, 2, tol)?;
    let l2 = Arc::new(image_subspace(&l1, &u1)?);
    let d1 = SubspaceOperator::new(u1.operator(), l1, l2.clone())?;
    out.push(("even_invertible".into(), d1.clone()));
    let u2 = even_invertible(rng, 2, tol)?;
    let l3 = Arc::new(image_subspace(&l2, &u2)?);
    let d2 = SubspaceOperator::new(u2.operator(), l2, l3)?;
    out.push(("composition".into(), d1.then(&d2)?));
    Ok(out)
}
