use std::f64::consts::PI;

use super::{CMat, TrigPoly, C64};
use crate::error::{Error, Result};

const MAX_GRID: usize = 1 << 18;

/// Winding of a sampled closed loop of nonzero complex numbers (samples taken
/// at equally spaced points of one period, endpoint excluded), in turns.
pub fn winding_of_scalar_samples(samples: &[C64]) -> f64 {
    let n = samples.len();
    let mut total = 0.0;
    for j in 0..n {
        let a = samples[j];
        let b = samples[(j + 1) % n];
        total += (b / a).arg();
    }
    total / (2.0 * PI)
}

/// Winding number of x ↦ det G(x) for a square loop given pointwise, using
/// argument accumulation on a grid of at least `min_grid` points that is
/// refined until every phase step is below π/3.
pub fn det_loop_winding<F>(dim: usize, min_grid: usize, rank_tol: f64, loop_at: F) -> Result<i64>
where
    F: Fn(f64) -> CMat,
{
    let mut m = min_grid.max(16);
    loop {
        let mut dets = Vec::with_capacity(m);
        for j in 0..m {
            let x = 2.0 * PI * j as f64 / m as f64;
            let g = loop_at(x);
            if g.nrows() != dim || g.ncols() != dim {
                return Err(Error::Structural("loop values must be square".into()));
            }
            let d = if dim == 0 { C64::new(1.0, 0.0) } else { g.determinant() };
            if d.norm() < rank_tol {
                return Err(Error::Ellipticity(format!("determinant {:.3e} below tolerance at x = {x:.6}", d.norm())));
            }
            dets.push(d);
        }
        let max_step = (0..m).map(|j| (dets[(j + 1) % m] / dets[j]).arg().abs()).fold(0.0, f64::max);
        if max_step < PI / 3.0 || m >= MAX_GRID {
            let w = winding_of_scalar_samples(&dets);
            let r = w.round();
            if (w - r).abs() > 1e-6 {
                return Err(Error::Internal(format!("winding {w} is not an integer")));
            }
            return Ok(r as i64);
        }
        m *= 2;
    }
}

/// Winding number of det G for a square trigonometric-polynomial loop. The
/// base grid has 8·(r·D + 1) points, enough to resolve the determinant, which
/// is a trigonometric polynomial of degree at most r·D.
pub fn winding_number(g: &TrigPoly, rank_tol: f64) -> Result<i64> {
    if g.rows() != g.cols() {
        return Err(Error::Structural(format!("winding needs a square loop, got {}x{}", g.rows(), g.cols())));
    }
    let grid = 8 * (g.rows() * g.degree() + 1);
    det_loop_winding(g.rows(), grid, rank_tol, |x| g.eval(x))
}
