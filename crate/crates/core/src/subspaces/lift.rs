use super::SubspaceSymbol;
use crate::circle::{ellipticity_check, projection_range, CircleSymbol, Face, Parity};
use crate::error::{Error, Result};
use crate::numeric::{c64, cis, CMat, TrigPoly};

/// Isomorphism σ: 2ᴺL → π*F with F trivial, in the form
/// σ_± = Ψ_± (1_{2ᴺ} ⊗ u*), where u is an orthonormal frame of L and Ψ_± are
/// unitary twists per face. The restricted inverse is ρ_± = (1 ⊗ u) Ψ_±*.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    order: u32,
    frame: TrigPoly,
    twist_plus: TrigPoly,
    twist_minus: TrigPoly,
    fit_residual: f64,
}

fn kron_identity(copies: usize, m: &TrigPoly) -> TrigPoly {
    TrigPoly::block_diag(&vec![m.clone(); copies])
}

impl Lift {
    /// σ = u* on L itself.
    pub fn from_frame(frame: TrigPoly) -> Self {
        let k = frame.cols();
        Lift {
            order: 0,
            frame,
            twist_plus: TrigPoly::identity(k),
            twist_minus: TrigPoly::identity(k),
            fit_residual: 0.0,
        }
    }

    /// Lift of 2ᴺL with the given face twists (each of size 2ᴺ·rank L).
    pub fn with_twists(frame: TrigPoly, order: u32, plus: TrigPoly, minus: TrigPoly) -> Result<Self> {
        let m = (1usize << order) * frame.cols();
        for t in [&plus, &minus] {
            if t.rows() != m || t.cols() != m {
                return Err(Error::Structural(format!("twist must be {m}x{m}")));
            }
            let d = crate::subspaces::unitarity_defect(t);
            if d > 1e-9 {
                return Err(Error::Precondition(format!("twist is not unitary (defect {d:e})")));
            }
        }
        Ok(Lift { order, frame, twist_plus: plus, twist_minus: minus, fit_residual: 0.0 })
    }

    /// (e^{ix} ⊕ 1 …) u* on face +, u* on face −.
    pub fn face_twisted(&self) -> Self {
        let m = self.f_rank();
        let mut d = CMat::identity(m, m);
        d[(0, 0)] = c64(0.0, 0.0);
        let mut e = CMat::zeros(m, m);
        e[(0, 0)] = c64(1.0, 0.0);
        let tw = TrigPoly::from_terms(m, m, [(0, d), (1, e)]).expect("square terms");
        Lift { twist_plus: tw.try_mul(&self.twist_plus).expect("same size"), ..self.clone() }
    }

    /// σ on face +, −σ on face −.
    pub fn odd_sign(&self) -> Self {
        Lift { twist_minus: self.twist_minus.scale(c64(-1.0, 0.0)), ..self.clone() }
    }

    /// Lift of 2ᴺL by 2ᴺ copies of this lift, with a winding twist on the
    /// first coordinate of face +.
    pub fn artificial(&self, order: u32) -> Self {
        let copies = 1usize << order;
        let base = Lift {
            order,
            twist_plus: kron_identity(copies, &self.twist_plus),
            twist_minus: kron_identity(copies, &self.twist_minus),
            ..self.clone()
        };
        if order == 0 {
            base
        } else {
            base.face_twisted()
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn frame(&self) -> &TrigPoly {
        &self.frame
    }

    pub fn copies(&self) -> usize {
        1usize << self.order
    }

    /// Rank of F.
    pub fn f_rank(&self) -> usize {
        self.copies() * self.frame.cols()
    }

    pub fn fit_residual(&self) -> f64 {
        self.fit_residual
    }

    pub fn twist(&self, f: Face) -> &TrigPoly {
        match f {
            Face::Plus => &self.twist_plus,
            Face::Minus => &self.twist_minus,
        }
    }

    /// σ: 2ᴺE → F.
    pub fn sigma(&self) -> CircleSymbol {
        let us = kron_identity(self.copies(), &self.frame.adjoint());
        CircleSymbol::new(
            0,
            self.twist_plus.try_mul(&us).expect("twist matches"),
            self.twist_minus.try_mul(&us).expect("twist matches"),
        )
        .expect("faces share a shape")
    }

    /// ρ: F → 2ᴺE with ρσ = projection onto 2ᴺL.
    pub fn restricted_inverse(&self) -> CircleSymbol {
        let u = kron_identity(self.copies(), &self.frame);
        CircleSymbol::new(
            0,
            u.try_mul(&self.twist_plus.adjoint()).expect("twist matches"),
            u.try_mul(&self.twist_minus.adjoint()).expect("twist matches"),
        )
        .expect("faces share a shape")
    }
}

fn polar(a: &CMat) -> CMat {
    let svd = a.clone().svd(true, true);
    svd.u.expect("u requested") * svd.v_t.expect("v requested")
}

const TRANSPORT_GRID: usize = 512;
const MAX_FIT_DEGREE: usize = 16;

/// Periodic orthonormal frame of the range of a projection loop: discrete
/// parallel transport around the circle, then the holonomy h = e^{2πiH} is
/// undone by e^{−ixH} and the result fitted by a trigonometric polynomial.
/// Returns the frame and the fit residual on the grid.
pub fn transport_frame(p: &TrigPoly, rank_tol: f64) -> Result<(TrigPoly, f64)> {
    let r = p.rows();
    let m = TRANSPORT_GRID;
    let xs: Vec<f64> = (0..m).map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64).collect();
    let ps: Vec<CMat> = xs.iter().map(|&x| p.eval(x)).collect();
    let t0 = projection_range(&ps[0])?;
    let k = t0.ncols();
    if k == 0 {
        return Ok((TrigPoly::zero(r, 0), 0.0));
    }
    let mut frames = Vec::with_capacity(m);
    frames.push(t0.clone());
    for j in 1..=m {
        let next = &ps[j % m] * &frames[j - 1];
        if crate::numeric::singular_values(&next).last().copied().unwrap_or(0.0) < 0.5 {
            return Err(Error::Internal("projection loop varies too fast for the transport grid".into()));
        }
        frames.push(polar(&next));
    }
    let hol = t0.adjoint() * &frames[m];
    let schur = hol.clone().schur();
    let (q, t) = schur.unpack();
    let angles: Vec<f64> = (0..k).map(|i| t[(i, i)].arg()).collect();
    let mut samples = Vec::with_capacity(m);
    for (j, &x) in xs.iter().enumerate() {
        let d = CMat::from_fn(k, k, |a, b| {
            if a == b {
                cis(-x * angles[a] / (2.0 * std::f64::consts::PI))
            } else {
                c64(0.0, 0.0)
            }
        });
        samples.push(&frames[j] * &q * d * q.adjoint());
    }
    let mut best: Option<(TrigPoly, f64)> = None;
    for d in 0..=MAX_FIT_DEGREE {
        let fit = TrigPoly::fit_uniform(&samples, d)?;
        let resid = xs.iter().zip(&samples).map(|(&x, s)| (fit.eval(x) - s).norm()).fold(0.0, f64::max);
        let done = resid < 1e-10;
        best = Some((fit, resid));
        if done {
            break;
        }
    }
    let (fit, resid) = best.expect("at least one degree tried");
    if resid > 1e-3_f64.max(rank_tol) {
        return Err(Error::Internal(format!("transported frame does not close (fit residual {resid:e})")));
    }
    Ok((clean_frame(fit), resid))
}

fn clean_frame(p: TrigPoly) -> TrigPoly {
    let terms: Vec<(i64, CMat)> = p
        .terms()
        .map(|(k, m)| {
            (
                k,
                m.map(|z| {
                    c64(if z.re.abs() < 1e-14 { 0.0 } else { z.re }, if z.im.abs() < 1e-14 { 0.0 } else { z.im })
                }),
            )
        })
        .collect();
    TrigPoly::from_terms(p.rows(), p.cols(), terms).expect("same shape").trimmed()
}

/// Lift of an even subspace symbol from the base: on the circle N = 0 always
/// suffices, with σ = u* for a transported frame u of L.
pub fn lift_symbol(l: &SubspaceSymbol, rank_tol: f64) -> Result<Lift> {
    if l.parity() != Parity::Even {
        return Err(Error::ParityMismatch(format!("lift from the base needs an even symbol, got {:?}", l.parity())));
    }
    let (u, resid) = transport_frame(l.projection().face(Face::Plus), rank_tol)?;
    let lift = Lift { fit_residual: resid, ..Lift::from_frame(u) };
    let target = SubspaceSymbol::full(lift.f_rank());
    let report = ellipticity_check(&lift.sigma(), l, &target, rank_tol.max(1e-6))?;
    if !report.elliptic {
        return Err(Error::Internal(format!(
            "transported frame is not an isomorphism onto the fiber: {}",
            report.diagnostic.unwrap_or_default()
        )));
    }
    Ok(lift)
}
