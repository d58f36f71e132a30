use std::ops::{Add, Mul, Neg, Sub};

use super::{cis, CMat, C64};
use crate::error::{Error, Result};

/// Matrix-valued trigonometric polynomial x ↦ Σ_{|k| ≤ D} c_k e^{ikx}.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    rows: usize,
    cols: usize,
    degree: usize,
    /// coefficient of e^{ikx} stored at index k + degree
    coeffs: Vec<CMat>,
}

impl TrigPoly {
    pub fn zero(rows: usize, cols: usize) -> Self {
        TrigPoly { rows, cols, degree: 0, coeffs: vec![CMat::zeros(rows, cols)] }
    }

    pub fn constant(m: CMat) -> Self {
        TrigPoly { rows: m.nrows(), cols: m.ncols(), degree: 0, coeffs: vec![m] }
    }

    pub fn identity(r: usize) -> Self {
        Self::constant(CMat::identity(r, r))
    }

    pub fn scalar(c: C64) -> Self {
        Self::constant(CMat::from_element(1, 1, c))
    }

    /// m · e^{ikx}
    pub fn monomial(k: i64, m: CMat) -> Self {
        let degree = k.unsigned_abs() as usize;
        let mut coeffs = vec![CMat::zeros(m.nrows(), m.ncols()); 2 * degree + 1];
        let (rows, cols) = (m.nrows(), m.ncols());
        coeffs[(k + degree as i64) as usize] = m;
        TrigPoly { rows, cols, degree, coeffs }
    }

    /// Builds from (k, c_k) pairs; repeated k accumulate.
    pub fn from_terms<I>(rows: usize, cols: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, CMat)>,
    {
        let mut out = TrigPoly::zero(rows, cols);
        for (k, m) in terms {
            if m.nrows() != rows || m.ncols() != cols {
                return Err(Error::Structural(format!(
                    "coefficient of e^({k}ix) has shape {}x{}, expected {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            out = &out + &TrigPoly::monomial(k, m);
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, k: i64) -> Option<&CMat> {
        let idx = k + self.degree as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            None
        } else {
            Some(&self.coeffs[idx as usize])
        }
    }

    /// Iterates (k, c_k) for k = −D..=D.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CMat)> {
        let d = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(i, m)| (i as i64 - d, m))
    }

    pub fn eval(&self, x: f64) -> CMat {
        let mut out = CMat::zeros(self.rows, self.cols);
        for (k, m) in self.terms() {
            out += m * cis(k as f64 * x);
        }
        out
    }

    /// Least-squares fit of degree `degree` to samples on the uniform grid
    /// x_j = 2πj/M; exact when M > 2·degree and the data is a trigonometric
    /// polynomial of that degree.
    pub fn fit_uniform(samples: &[CMat], degree: usize) -> Result<Self> {
        let m = samples.len();
        if m <= 2 * degree {
            return Err(Error::Precondition(format!("{m} samples cannot resolve degree {degree}")));
        }
        let (rows, cols) = (samples[0].nrows(), samples[0].ncols());
        let mut coeffs = vec![CMat::zeros(rows, cols); 2 * degree + 1];
        for (j, s) in samples.iter().enumerate() {
            let x = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            for (i, c) in coeffs.iter_mut().enumerate() {
                let k = i as i64 - degree as i64;
                *c += s * cis(-(k as f64) * x);
            }
        }
        let inv = C64::new(1.0 / m as f64, 0.0);
        for c in coeffs.iter_mut() {
            *c *= inv;
        }
        Ok(TrigPoly { rows, cols, degree, coeffs })
    }

    /// Entry-wise bound Σ_k ‖c_k‖_F on the sup norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(super::frobenius).sum()
    }

    fn widen(&self, degree: usize) -> Self {
        if degree <= self.degree {
            return self.clone();
        }
        let pad = degree - self.degree;
        let mut coeffs = vec![CMat::zeros(self.rows, self.cols); 2 * degree + 1];
        for (i, m) in self.coeffs.iter().enumerate() {
            coeffs[i + pad] = m.clone();
        }
        TrigPoly { rows: self.rows, cols: self.cols, degree, coeffs }
    }

    /// Drops leading coefficients that are exactly zero.
    pub fn trimmed(mut self) -> Self {
        while self.degree > 0 {
            let lo = &self.coeffs[0];
            let hi = &self.coeffs[self.coeffs.len() - 1];
            if lo.iter().all(|z| *z == C64::new(0.0, 0.0)) && hi.iter().all(|z| *z == C64::new(0.0, 0.0)) {
                self.coeffs.remove(0);
                self.coeffs.pop();
                self.degree -= 1;
            } else {
                break;
            }
        }
        self
    }

    pub fn scale(&self, c: C64) -> Self {
        TrigPoly {
            rows: self.rows,
            cols: self.cols,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|m| m * c).collect(),
        }
    }

    /// Pointwise conjugate transpose: coefficient k of G* is (c_{−k})*.
    pub fn adjoint(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|m| m.adjoint()).collect();
        TrigPoly { rows: self.cols, cols: self.rows, degree: self.degree, coeffs }
    }

    /// Multiplies by e^{ikx}.
    pub fn shift(&self, k: i64) -> Self {
        self * &TrigPoly::monomial(k, CMat::identity(self.cols, self.cols))
    }

    pub fn try_mul(&self, other: &TrigPoly) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let degree = self.degree + other.degree;
        let mut coeffs = vec![CMat::zeros(self.rows, other.cols); 2 * degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(TrigPoly { rows: self.rows, cols: other.cols, degree, coeffs }.trimmed())
    }

    pub fn try_add(&self, other: &TrigPoly) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Structural(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let degree = self.degree.max(other.degree);
        let a = self.widen(degree);
        let b = other.widen(degree);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(TrigPoly { rows: self.rows, cols: self.cols, degree, coeffs }.trimmed())
    }

    /// Block-diagonal sum of the given polynomials.
    pub fn block_diag(parts: &[TrigPoly]) -> Self {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let degree = parts.iter().map(|p| p.degree).max().unwrap_or(0);
        let mut coeffs = vec![CMat::zeros(rows, cols); 2 * degree + 1];
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for (k, m) in p.terms() {
                let idx = (k + degree as i64) as usize;
                coeffs[idx].view_mut((r0, c0), (p.rows, p.cols)).copy_from(m);
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        TrigPoly { rows, cols, degree, coeffs }
    }

    /// Horizontal concatenation [A B ...].
    pub fn hstack(parts: &[TrigPoly]) -> Result<Self> {
        let rows = parts.first().map(|p| p.rows).unwrap_or(0);
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::Structural("hstack with mismatched row counts".into()));
        }
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let degree = parts.iter().map(|p| p.degree).max().unwrap_or(0);
        let mut coeffs = vec![CMat::zeros(rows, cols); 2 * degree + 1];
        let mut c0 = 0;
        for p in parts {
            for (k, m) in p.terms() {
                coeffs[(k + degree as i64) as usize].view_mut((0, c0), (rows, p.cols)).copy_from(m);
            }
            c0 += p.cols;
        }
        Ok(TrigPoly { rows, cols, degree, coeffs })
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[TrigPoly]) -> Result<Self> {
        let t: Vec<TrigPoly> = parts.iter().map(|p| p.adjoint()).collect();
        Ok(TrigPoly::hstack(&t)?.adjoint())
    }

    /// Keeps the listed columns.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let coeffs = self.coeffs.iter().map(|m| m.select_columns(cols)).collect();
        TrigPoly { rows: self.rows, cols: cols.len(), degree: self.degree, coeffs }
    }

    /// Keeps the listed rows.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let coeffs = self.coeffs.iter().map(|m| m.select_rows(rows)).collect();
        TrigPoly { rows: rows.len(), cols: self.cols, degree: self.degree, coeffs }
    }

    /// Sup-norm distance estimated on a uniform grid.
    pub fn grid_distance(&self, other: &TrigPoly, samples: usize) -> f64 {
        (0..samples)
            .map(|j| {
                let x = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
                super::frobenius(&(self.eval(x) - other.eval(x)))
            })
            .fold(0.0, f64::max)
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_add(rhs).expect("trig polynomial shapes must agree")
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_add(&rhs.scale(C64::new(-1.0, 0.0))).expect("trig polynomial shapes must agree")
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_mul(rhs).expect("trig polynomial shapes must be composable")
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}
