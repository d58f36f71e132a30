use super::{CircleSymbol, Face, FullSymbol};
use crate::error::{Error, Result};
use crate::numeric::{hermitian_eig, singular_values, CMat};
use crate::subspaces::SubspaceSymbol;

/// Parity class of a projection symbol under ξ ↦ −ξ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// Sample points used to compare symbol faces.
pub fn symbol_grid(degree: usize) -> Vec<f64> {
    let m = (16 * (degree + 1)).max(64);
    (0..m).map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64).collect()
}

fn projection_defect(p: &CMat) -> f64 {
    let sq = p * p - p;
    let herm = p - p.adjoint();
    sq.norm().max(herm.norm())
}

/// Orthonormal basis of the range of an orthogonal projection.
pub fn projection_range(p: &CMat) -> Result<CMat> {
    let h = (p + p.adjoint()) * crate::numeric::c64(0.5, 0.0);
    let e = hermitian_eig(&h)?;
    let keep: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] > 0.5).collect();
    Ok(e.vectors.select_columns(&keep))
}

/// Checks p² = p = p* on the grid, returning the worst defect.
pub fn check_projection(p: &CircleSymbol, tol: f64) -> Result<f64> {
    if p.rows() != p.cols() {
        return Err(Error::Precondition("projection symbol must be square".into()));
    }
    let mut worst: f64 = 0.0;
    for x in symbol_grid(p.degree()) {
        for f in Face::BOTH {
            worst = worst.max(projection_defect(&p.eval(f, x)));
        }
    }
    if worst > tol {
        return Err(Error::Precondition(format!("symbol is not a projection (defect {worst:e})")));
    }
    Ok(worst)
}

/// Even when both faces have the same range everywhere, odd when the two
/// ranges are complementary everywhere.
pub fn classify_parity(p: &CircleSymbol, tol: f64) -> Result<Parity> {
    check_projection(p, tol)?;
    let r = p.rows();
    let mut even = true;
    let mut odd = true;
    for x in symbol_grid(p.degree()) {
        let pp = p.eval(Face::Plus, x);
        let pm = p.eval(Face::Minus, x);
        if even && (&pp - &pm).norm() > tol {
            even = false;
        }
        if odd {
            let bp = projection_range(&pp)?;
            let bm = projection_range(&pm)?;
            if bp.ncols() + bm.ncols() != r {
                odd = false;
            } else if r > 0 {
                let mut joint = CMat::zeros(r, r);
                joint.columns_mut(0, bp.ncols()).copy_from(&bp);
                joint.columns_mut(bp.ncols(), bm.ncols()).copy_from(&bm);
                let s = singular_values(&joint);
                if s.last().copied().unwrap_or(0.0) <= tol {
                    odd = false;
                }
            }
        }
        if !even && !odd {
            return Ok(Parity::Neither);
        }
    }
    Ok(if even {
        Parity::Even
    } else if odd {
        Parity::Odd
    } else {
        Parity::Neither
    })
}

/// True iff each term of order k satisfies a_{k,−} = (−1)^k a_{k,+}.
pub fn check_transmission_parity(f: &FullSymbol, tol: f64) -> bool {
    f.terms().iter().all(|t| {
        let sign = if t.order().rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let flipped = t.face(Face::Plus).scale(crate::numeric::c64(sign, 0.0));
        t.face(Face::Minus).grid_distance(&flipped, symbol_grid(t.degree()).len()) <= tol
    })
}

/// Outcome of an ellipticity test for σ: L₁ → L₂.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticityReport {
    pub elliptic: bool,
    pub min_singular: f64,
    pub worst_face: Face,
    pub worst_x: f64,
    pub diagnostic: Option<String>,
}

/// Tests that σ restricted to Im L₁ is an isomorphism onto Im L₂ at every
/// grid point of both faces.
pub fn ellipticity_check(
    sigma: &CircleSymbol,
    l1: &SubspaceSymbol,
    l2: &SubspaceSymbol,
    rank_tol: f64,
) -> Result<EllipticityReport> {
    let (p1, p2) = (l1.projection(), l2.projection());
    if sigma.cols() != p1.rows() || sigma.rows() != p2.rows() {
        return Err(Error::Structural("symbol does not map between the given bundles".into()));
    }
    let mut report = EllipticityReport {
        elliptic: true,
        min_singular: f64::INFINITY,
        worst_face: Face::Plus,
        worst_x: 0.0,
        diagnostic: None,
    };
    for f in Face::BOTH {
        if l1.face_rank(f) != l2.face_rank(f) {
            report.elliptic = false;
            report.min_singular = 0.0;
            report.worst_face = f;
            report.diagnostic =
                Some(format!("rank mismatch on face {f:?}: {} vs {}", l1.face_rank(f), l2.face_rank(f)));
            return Ok(report);
        }
    }
    let scale = sigma.face(Face::Plus).coefficient_norm().max(sigma.face(Face::Minus).coefficient_norm()).max(1.0);
    let degree = sigma.degree() + p1.degree() + p2.degree();
    for x in symbol_grid(degree) {
        for f in Face::BOTH {
            let s = sigma.eval(f, x);
            let q1 = p1.eval(f, x);
            let q2 = p2.eval(f, x);
            let r2 = q2.nrows();
            let leak = (CMat::identity(r2, r2) - &q2) * &s * &q1;
            if leak.norm() > 1e3 * rank_tol * scale {
                return Err(Error::Precondition(format!(
                    "symbol does not map L1 into L2 (leak {:e} at x = {x:.4})",
                    leak.norm()
                )));
            }
            let b1 = projection_range(&q1)?;
            let b2 = projection_range(&q2)?;
            if b1.ncols() == 0 {
                continue;
            }
            let m = b2.adjoint() * s * b1;
            let smin = singular_values(&m).last().copied().unwrap_or(0.0);
            if smin < report.min_singular {
                report.min_singular = smin;
                report.worst_face = f;
                report.worst_x = x;
            }
        }
    }
    if report.min_singular <= rank_tol {
        report.elliptic = false;
        report.diagnostic = Some(format!(
            "restricted symbol degenerates on face {:?} near x = {:.4}",
            report.worst_face, report.worst_x
        ));
    }
    Ok(report)
}
