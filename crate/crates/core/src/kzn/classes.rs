use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::circle::Face;
use crate::error::{Error, Result};
use crate::numeric::{c64, cis, det_loop_winding, winding_number, CMat, TrigPoly};
use crate::subspaces::PdoSubspace;

/// K(𝕄_n) = ℤ ⊕ ℤ_n, with torsion generator [γ_n] − 1 where γ_n is the
/// pull-back of the Hopf bundle, clutched by z ↦ z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreSpaceData {
    pub n: u64,
    /// degree of the clutching function of γ_n
    pub gamma_clutch: i64,
    pub free_rank: u32,
    pub torsion_order: u64,
}

impl MooreSpaceData {
    pub fn torsion_generator(&self) -> KClassZn {
        KClassZn { n: self.n, free_part: 0, torsion_part: 1 }
    }

    /// Smallest k > 0 with k·([γ_n] − 1) = 0.
    pub fn generator_order(&self) -> u64 {
        let g = self.torsion_generator();
        let mut acc = g;
        let mut k = 1;
        while acc.torsion_part != 0 {
            acc = acc + g;
            k += 1;
        }
        k
    }
}

pub fn moore_k(n: u64) -> Result<MooreSpaceData> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    Ok(MooreSpaceData { n, gamma_clutch: 1, free_rank: 1, torsion_order: n })
}

/// A class with ℤ_n coefficients over the model base: an integer part and a
/// residue mod n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClassZn {
    pub n: u64,
    pub free_part: i64,
    pub torsion_part: u64,
}

impl KClassZn {
    pub fn new(n: u64, free_part: i64, torsion: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(KClassZn { n, free_part, torsion_part: torsion.rem_euclid(n as i64) as u64 })
    }

    pub fn zero(n: u64) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    pub fn try_add(&self, other: &KClassZn) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch(self.n, other.n));
        }
        Ok(*self + *other)
    }
}

impl Add for KClassZn {
    type Output = KClassZn;
    /// Panics on different moduli; use `try_add` for checked addition.
    fn add(self, o: KClassZn) -> KClassZn {
        assert_eq!(self.n, o.n, "classes with different moduli");
        KClassZn {
            n: self.n,
            free_part: self.free_part + o.free_part,
            torsion_part: (self.torsion_part + o.torsion_part) % self.n,
        }
    }
}

impl Neg for KClassZn {
    type Output = KClassZn;
    fn neg(self) -> KClassZn {
        KClassZn { n: self.n, free_part: -self.free_part, torsion_part: (self.n - self.torsion_part) % self.n }
    }
}

/// Reduction K → K(·; ℤ_n) of an integral class.
pub fn reduction_mod_n(free: i64, n: u64) -> Result<KClassZn> {
    KClassZn::new(n, free, free)
}

/// Obstruction to lifting a ℤ_n class to an integral one, in ℤ_n: the
/// torsion part minus the reduction of the free part.
pub fn bockstein(c: &KClassZn) -> u64 {
    (c.torsion_part as i64 - c.free_part).rem_euclid(c.n as i64) as u64
}

/// Discrete homotopy diag(z, …, z) ~ diag(zⁿ, 1, …, 1) through invertible
/// loops, with the winding of det recorded at every step.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPath {
    pub n: usize,
    pub steps: Vec<TrigPoly>,
    pub windings: Vec<i64>,
    /// smallest |det| over the path and the sample grid
    pub min_det: f64,
}

const GAMMA_STEPS: usize = 10;

fn diag_power(n: usize, i: usize, k: i64) -> TrigPoly {
    let mut d = CMat::identity(n, n);
    d[(i, i)] = c64(0.0, 0.0);
    let mut e = CMat::zeros(n, n);
    e[(i, i)] = c64(1.0, 0.0);
    if k == 0 {
        return TrigPoly::identity(n);
    }
    TrigPoly::from_terms(n, n, [(0, d), (k, e)]).expect("square terms")
}

fn rotation(n: usize, i: usize, j: usize, theta: f64) -> TrigPoly {
    let (s, c) = theta.sin_cos();
    let mut m = CMat::identity(n, n);
    m[(i, i)] = c64(c, 0.0);
    m[(j, j)] = c64(c, 0.0);
    m[(i, j)] = c64(-s, 0.0);
    m[(j, i)] = c64(s, 0.0);
    TrigPoly::constant(m)
}

/// Stage j moves the factor z of coordinate j onto coordinate 0:
/// E₀(z^j) R(θ) E₀(z) R(θ)⁻¹ times z on coordinates > j, with θ from π/2 to 0.
fn gamma_point(n: usize, s: f64) -> TrigPoly {
    if n == 1 {
        return diag_power(1, 0, 1);
    }
    let stages = (n - 1) as f64;
    let stage = ((s * stages).floor() as usize).min(n - 2);
    let t = s * stages - stage as f64;
    let j = stage + 1;
    let theta = (1.0 - t) * std::f64::consts::FRAC_PI_2;
    let r = rotation(n, 0, j, theta);
    let mut g = diag_power(n, 0, j as i64)
        .try_mul(&r)
        .and_then(|m| m.try_mul(&diag_power(n, 0, 1)))
        .and_then(|m| m.try_mul(&r.adjoint()))
        .expect("square factors");
    for k in j + 1..n {
        g = g.try_mul(&diag_power(n, k, 1)).expect("square factors");
    }
    g.trimmed()
}

/// The trivialization witness β: nγ_n ≅ ℂⁿ over the boundary circle.
pub fn gamma_trivialization(n: usize) -> Result<GammaPath> {
    if n == 0 {
        return Err(Error::InvalidModulus(0));
    }
    let mut steps = Vec::with_capacity(GAMMA_STEPS + 1);
    let mut windings = Vec::with_capacity(GAMMA_STEPS + 1);
    let mut min_det = f64::INFINITY;
    for i in 0..=GAMMA_STEPS {
        let g = gamma_point(n, i as f64 / GAMMA_STEPS as f64);
        windings.push(winding_number(&g, 1e-9)?);
        for k in 0..64 {
            let x = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            min_det = min_det.min(g.eval(x).determinant().norm());
        }
        steps.push(g);
    }
    Ok(GammaPath { n, steps, windings, min_det })
}

/// χ₁ datum of [z p + (1 − p)] per face: the rank of p and the winding in z.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceClass {
    pub plus_rank: i64,
    pub plus_winding: i64,
    pub minus_rank: i64,
    pub minus_winding: i64,
}

impl SubspaceClass {
    pub fn scale(&self, n: i64) -> Self {
        SubspaceClass {
            plus_rank: n * self.plus_rank,
            plus_winding: n * self.plus_winding,
            minus_rank: n * self.minus_rank,
            minus_winding: n * self.minus_winding,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == SubspaceClass::default()
    }
}

impl Add for SubspaceClass {
    type Output = SubspaceClass;
    fn add(self, o: SubspaceClass) -> SubspaceClass {
        SubspaceClass {
            plus_rank: self.plus_rank + o.plus_rank,
            plus_winding: self.plus_winding + o.plus_winding,
            minus_rank: self.minus_rank + o.minus_rank,
            minus_winding: self.minus_winding + o.minus_winding,
        }
    }
}

impl Sub for SubspaceClass {
    type Output = SubspaceClass;
    fn sub(self, o: SubspaceClass) -> SubspaceClass {
        self + o.scale(-1)
    }
}

pub fn subspace_class(l: &PdoSubspace, rank_tol: f64) -> Result<SubspaceClass> {
    let p = l.symbol().projection();
    let r = p.rows();
    let mut out = [(0i64, 0i64); 2];
    for (slot, f) in Face::BOTH.into_iter().enumerate() {
        let pf = p.eval(f, 0.0);
        let rank = pf.trace().re.round() as i64;
        let q = CMat::identity(r, r) - &pf;
        let w = det_loop_winding(r, 16, rank_tol, |t| &pf * cis(t) + &q)?;
        out[slot] = (rank, w);
    }
    Ok(SubspaceClass { plus_rank: out[0].0, plus_winding: out[0].1, minus_rank: out[1].0, minus_winding: out[1].1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moore_generator_has_order_n() {
        for n in [2, 3, 4, 8] {
            let m = moore_k(n).unwrap();
            assert_eq!(m.generator_order(), n);
        }
        assert!(moore_k(1).is_err());
    }

    #[test]
    fn gamma_path_keeps_winding() {
        for n in [1, 2, 3, 4, 8] {
            let p = gamma_trivialization(n).unwrap();
            assert!(p.windings.iter().all(|&w| w == n as i64), "{n}: {:?}", p.windings);
            assert!(p.min_det > 0.5);
        }
    }

    #[test]
    fn coefficient_sequence() {
        let c = reduction_mod_n(12, 4).unwrap();
        assert_eq!(c.torsion_part, 0);
        assert_eq!(bockstein(&c), 0);
        let t = KClassZn::new(4, 0, 1).unwrap();
        assert_eq!(bockstein(&t), 1);
        assert_eq!(t + (-t), KClassZn::zero(4).unwrap());
    }
}
