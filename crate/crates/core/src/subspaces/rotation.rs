use crate::error::{Error, Result};
use crate::numeric::{c64, CMat};

/// P_φ on the doubled space:
/// [[P + (1−P) sin²φ, (1−P) cosφ sinφ], [(1−P) cosφ sinφ, (1−P) cos²φ]].
/// P₀ = diag(P, 1 − P) and P_{π/2} = diag(I, 0).
pub fn rotation_homotopy(p: &CMat, phi: f64, tol: f64) -> Result<CMat> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(Error::Structural("projection must be square".into()));
    }
    let scale = p.norm().max(1.0);
    if (p * p - p).norm() > tol * scale || (p - p.adjoint()).norm() > tol * scale {
        return Err(Error::Precondition("rotation homotopy needs an orthogonal projection".into()));
    }
    let q = CMat::identity(n, n) - p;
    let (s, c) = phi.sin_cos();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&(p + &q * c64(s * s, 0.0)));
    out.view_mut((0, n), (n, n)).copy_from(&(&q * c64(c * s, 0.0)));
    out.view_mut((n, 0), (n, n)).copy_from(&(&q * c64(c * s, 0.0)));
    out.view_mut((n, n), (n, n)).copy_from(&(&q * c64(c * c, 0.0)));
    Ok(out)
}
