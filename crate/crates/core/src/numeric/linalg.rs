use nalgebra::SymmetricEigen;

use super::{CMat, C64};
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest column 2-norm, a cheap lower bound for the operator norm.
pub fn column_norm_max(m: &CMat) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

/// (M + M*)/2, exactly Hermitian in floating point.
pub fn symmetrize(m: &CMat) -> CMat {
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    out
}

pub fn is_hermitian(m: &CMat, rel_tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    let n = m.nrows();
    let mut diff = 0.0;
    for j in 0..n {
        for i in 0..n {
            diff += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
        }
    }
    diff.sqrt() <= rel_tol * scale
}

fn check_hermitian(h: &CMat) -> Result<()> {
    if h.nrows() != h.ncols() {
        return Err(Error::Structural(format!("expected square matrix, got {}x{}", h.nrows(), h.ncols())));
    }
    if !is_hermitian(h, 1e-12) {
        return Err(Error::Structural("matrix is not Hermitian".into()));
    }
    Ok(())
}

/// Hermitian eigen-decomposition with ascending eigenvalues and the matching
/// unitary eigenvector matrix.
pub fn hermitian_eig(h: &CMat) -> Result<Eigen> {
    check_hermitian(h)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: CMat::zeros(0, 0) });
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    if h.nrows() == 0 {
        return Ok(vec![]);
    }
    let mut v: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol` times the largest one (or times 1
/// for the zero matrix).
pub fn stable_rank(m: &CMat, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("stable_rank needs tol > 0".into()));
    }
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    let scale = if top > 0.0 { top } else { 1.0 };
    Ok(s.iter().filter(|&&x| x > tol * scale).count())
}

/// Orthonormal basis for the column span of `m`, dropping directions whose
/// singular value falls below `tol` times the largest.
pub fn orthonormal_columns(m: &CMat, tol: f64) -> CMat {
    if m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let gram = symmetrize(&(m.adjoint() * m));
    let eig = hermitian_eig(&gram).expect("gram matrix is Hermitian");
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> =
        (0..eig.values.len()).filter(|&i| eig.values[i] > (tol * tol) * top.max(f64::MIN_POSITIVE)).collect();
    let mut out = CMat::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        let v = m * eig.vectors.column(i);
        let scale = C64::new(1.0 / eig.values[i].sqrt(), 0.0);
        out.set_column(j, &(v * scale));
    }
    // a second pass through QR restores orthonormality to working precision
    out.qr().q()
}
