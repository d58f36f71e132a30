use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use super::{CoordinateSet, EvenInvertible, FramedSubspace, SubspaceSymbol};
use crate::circle::{
    projection_range, quantize, symbol_grid, CircleOperator, CircleSymbol, Face, FullSymbol, Parity, Window,
};
use crate::error::{Error, Result};
use crate::numeric::{c64, hermitian_eig, orthonormal_columns, symmetrize, CMat, ToleranceConfig, TrigPoly};

/// How the projections of a subspace are produced at each truncation.
#[derive(Clone, Debug)]
pub enum Source {
    /// F(Im Π_C) with an explicit frame.
    Framed(FramedSubspace),
    /// Spectral cut at 1/2 of the symmetrized quantization of the symbol.
    SpectralCut,
    /// Span of eigenvectors with λ ≥ 0 of a self-adjoint operator.
    Spectral(CircleOperator),
    Complement(Arc<PdoSubspace>),
    DirectSum(Vec<Arc<PdoSubspace>>),
    /// Image of a subspace under an invertible operator.
    Image(CircleOperator, Arc<PdoSubspace>),
}

/// Projection data of a subspace at truncation N.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub n: i64,
    /// orthonormal basis of the range over modes −N..=N
    pub basis: CMat,
    /// eigenvalues of the matrix that was cut, when there is one
    pub spectrum: Vec<f64>,
    pub warnings: Vec<String>,
}

impl Realization {
    pub fn projection(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }
}

/// A pseudodifferential subspace L̂ = Im P together with its symbol and a
/// cache of realizations keyed by truncation.
#[derive(Debug)]
pub struct PdoSubspace {
    symbol: SubspaceSymbol,
    source: Source,
    tol: ToleranceConfig,
    cache: RwLock<BTreeMap<i64, Arc<Realization>>>,
}

impl Clone for PdoSubspace {
    fn clone(&self) -> Self {
        PdoSubspace {
            symbol: self.symbol.clone(),
            source: self.source.clone(),
            tol: self.tol,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

/// Weight 1 on modes with |n| > N/2, used to tell boundary artefacts of a
/// truncation from genuine interior vectors.
pub fn edge_mass(v: &CMat, window: Window, r: usize) -> CMat {
    let half = window.hi.max(-window.lo) as f64 / 2.0;
    let mut out = CMat::zeros(v.ncols(), v.ncols());
    for n in window.modes() {
        if (n.abs() as f64) > half {
            let rows = v.rows(window.offset(n, r), r);
            out += rows.adjoint() * rows;
        }
    }
    out
}

/// Embeds the bases of subspaces of E₁, E₂, … into the mode-major layout of
/// E₁ ⊕ E₂ ⊕ … .
pub fn interleave_bases(parts: &[(&CMat, usize)], window: Window) -> CMat {
    let total: usize = parts.iter().map(|(_, r)| r).sum();
    let cols: usize = parts.iter().map(|(b, _)| b.ncols()).sum();
    let mut out = CMat::zeros(window.dim(total), cols);
    let (mut c0, mut off) = (0, 0);
    for (b, r) in parts {
        for n in window.modes() {
            let src = b.rows(window.offset(n, *r), *r);
            out.view_mut((window.offset(n, total) + off, c0), (*r, b.ncols())).copy_from(&src);
        }
        c0 += b.ncols();
        off += r;
    }
    out
}

fn complement_basis(b: &CMat) -> Result<CMat> {
    let n = b.nrows();
    let p = CMat::identity(n, n) - b * b.adjoint();
    projection_range(&symmetrize(&p))
}

impl PdoSubspace {
    fn with_source(symbol: SubspaceSymbol, source: Source, tol: ToleranceConfig) -> Self {
        PdoSubspace { symbol, source, tol, cache: RwLock::new(BTreeMap::new()) }
    }

    pub fn framed(f: FramedSubspace, tol: ToleranceConfig) -> Result<Self> {
        let symbol = f.symbol(tol.rank_tol.sqrt())?;
        Ok(Self::with_source(symbol, Source::Framed(f), tol))
    }

    pub fn coordinate(c: CoordinateSet, tol: ToleranceConfig) -> Self {
        let symbol = SubspaceSymbol::new(c.symbol(), tol.rank_tol).expect("coordinate masks are projections");
        Self::with_source(symbol, Source::Framed(FramedSubspace::coordinate(c)), tol)
    }

    /// All sections of the trivial rank-r bundle.
    pub fn full(r: usize, tol: ToleranceConfig) -> Self {
        Self::coordinate(CoordinateSet::full(r), tol)
    }

    /// Modes n ≥ 0 of the trivial line.
    pub fn hardy(tol: ToleranceConfig) -> Self {
        Self::coordinate(CoordinateSet::hardy(), tol)
    }

    /// Modes n ≥ k of the trivial line.
    pub fn hardy_from(k: i64, tol: ToleranceConfig) -> Self {
        Self::coordinate(CoordinateSet::hardy_from(k), tol)
    }

    pub fn symbol(&self) -> &SubspaceSymbol {
        &self.symbol
    }

    pub fn parity(&self) -> Parity {
        self.symbol.parity()
    }

    /// Rank of the ambient bundle.
    pub fn rank(&self) -> usize {
        self.symbol.rank()
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn tolerances(&self) -> ToleranceConfig {
        self.tol
    }

    pub fn as_framed(&self) -> Option<&FramedSubspace> {
        match &self.source {
            Source::Framed(f) => Some(f),
            _ => None,
        }
    }

    /// Smallest truncation at which the subspace can be realized.
    pub fn min_truncation(&self) -> i64 {
        let own = 2 * self.symbol.projection().degree() as i64 + 1;
        let inner = match &self.source {
            Source::Framed(f) => f.coords().flip_radius() + 1 + f.smoothing().map_or(0, |k| k.radius()),
            Source::Spectral(op) => op.localization_radius() + op.bandwidth(),
            Source::Complement(a) => a.min_truncation(),
            Source::DirectSum(ps) => ps.iter().map(|p| p.min_truncation()).max().unwrap_or(0),
            Source::Image(op, a) => a.min_truncation() + op.localization_radius() + op.bandwidth(),
            Source::SpectralCut => 0,
        };
        own.max(inner)
    }

    /// Projection data at truncation N; cached, computed deterministically.
    pub fn realization(&self, n: i64) -> Result<Arc<Realization>> {
        if let Some(r) = self.cache.read().expect("cache lock").get(&n) {
            return Ok(r.clone());
        }
        let fresh = Arc::new(self.compute(n)?);
        let mut w = self.cache.write().expect("cache lock");
        Ok(w.entry(n).or_insert(fresh).clone())
    }

    pub fn projection(&self, n: i64) -> Result<CMat> {
        Ok(self.realization(n)?.projection())
    }

    pub fn rank_at(&self, n: i64) -> Result<usize> {
        Ok(self.realization(n)?.rank())
    }

    fn compute(&self, n: i64) -> Result<Realization> {
        let win = Window::symmetric(n);
        let r = self.rank();
        match &self.source {
            Source::Framed(f) => {
                Ok(Realization { n, basis: f.basis(n, self.tol.rank_tol), spectrum: vec![], warnings: vec![] })
            }
            Source::SpectralCut => cut_symbol(&self.symbol, n),
            Source::Spectral(op) => {
                let q = symmetrize(&op.matrix(win, win));
                let e = hermitian_eig(&q)?;
                let mut warnings = Vec::new();
                let keep: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] >= 0.0).collect();
                for &v in &e.values {
                    if v != 0.0 && v.abs() <= self.tol.eig_tol {
                        warnings.push(format!("eigenvalue {v:e} within the kernel tolerance at N = {n}"));
                    }
                }
                Ok(Realization { n, basis: e.vectors.select_columns(&keep), spectrum: e.values, warnings })
            }
            Source::Complement(a) => {
                let inner = a.realization(n)?;
                Ok(Realization { n, basis: complement_basis(&inner.basis)?, spectrum: vec![], warnings: vec![] })
            }
            Source::DirectSum(ps) => {
                let reals = ps.iter().map(|p| p.realization(n)).collect::<Result<Vec<_>>>()?;
                let parts: Vec<(&CMat, usize)> = reals.iter().zip(ps).map(|(re, p)| (&re.basis, p.rank())).collect();
                let warnings = reals.iter().flat_map(|re| re.warnings.clone()).collect();
                Ok(Realization { n, basis: interleave_bases(&parts, win), spectrum: vec![], warnings })
            }
            Source::Image(op, a) => {
                let inner = a.realization(n)?;
                let u = op.matrix(win, win);
                let basis = orthonormal_columns(&(u * &inner.basis), self.tol.rank_tol);
                debug_assert_eq!(basis.nrows(), win.dim(r));
                Ok(Realization { n, basis, spectrum: vec![], warnings: inner.warnings.clone() })
            }
        }
    }

    /// Per-N listing of the cut spectrum and the rank of P_N.
    pub fn dump_csv(&self, ns: &[i64]) -> Result<String> {
        let mut out = String::from("n,index,eigenvalue,rank\n");
        for &n in ns {
            let re = self.realization(n)?;
            if re.spectrum.is_empty() {
                writeln!(out, "{n},,,{}", re.rank()).expect("string write");
            }
            for (i, v) in re.spectrum.iter().enumerate() {
                writeln!(out, "{n},{i},{v:.17e},{}", re.rank()).expect("string write");
            }
        }
        Ok(out)
    }
}

/// Spectral cut of sym(Op(p)) at 1/2. Eigenvalues inside [1/4, 3/4] are
/// tolerated only for vectors concentrated near the truncation boundary; those
/// are assigned to the complement and recorded as warnings.
fn cut_symbol(s: &SubspaceSymbol, n: i64) -> Result<Realization> {
    let t = quantize(&FullSymbol::principal(s.projection().clone()), n)?;
    let q = symmetrize(&t.matrix);
    let e = hermitian_eig(&q)?;
    let win = Window::symmetric(n);
    let r = s.rank();
    let mut keep = Vec::new();
    let mut warnings = Vec::new();
    for (i, &v) in e.values.iter().enumerate() {
        if (0.25..=0.75).contains(&v) {
            let col = e.vectors.columns(i, 1).into_owned();
            let mass = edge_mass(&col, win, r)[(0, 0)].re;
            if mass <= 0.5 {
                return Err(Error::NoSpectralGap { n, value: v });
            }
            warnings.push(format!("boundary state with eigenvalue {v:.6} at N = {n} (edge mass {mass:.3})"));
        } else if v > 0.75 {
            keep.push(i);
        }
    }
    Ok(Realization { n, basis: e.vectors.select_columns(&keep), spectrum: e.values, warnings })
}

/// Exact projections from a projection-valued symbol by spectral cutting.
pub fn realize_projection(p: &SubspaceSymbol, n: i64, tol: ToleranceConfig) -> Result<PdoSubspace> {
    let need = 2 * p.projection().degree() as i64;
    if n <= need {
        return Err(Error::TruncationTooSmall { n, need });
    }
    let sub = PdoSubspace::with_source(p.clone(), Source::SpectralCut, tol);
    sub.realization(n)?;
    Ok(sub)
}

/// Nonnegative spectral subspace of a self-adjoint elliptic operator. The
/// attached symbol is the pointwise nonnegative spectral projection of the
/// principal symbol, which must itself be a trigonometric polynomial.
pub fn spectral_subspace(op: &CircleOperator, tol: ToleranceConfig) -> Result<PdoSubspace> {
    op.validate()?;
    if op.rows_rank() != op.cols_rank() {
        return Err(Error::Precondition("spectral subspaces need a square operator".into()));
    }
    let sigma = op.principal_symbol()?;
    let p = nonnegative_projection(&sigma, tol.rank_tol)?;
    let symbol = SubspaceSymbol::new(p, tol.rank_tol.sqrt())?;
    Ok(PdoSubspace::with_source(symbol, Source::Spectral(op.clone()), tol))
}

/// Pointwise projection onto λ ≥ 0 of a Hermitian symbol, recovered as a
/// trigonometric polynomial by exact Fourier fitting.
pub fn nonnegative_projection(sigma: &CircleSymbol, rank_tol: f64) -> Result<CircleSymbol> {
    let r = sigma.rows();
    let grid = symbol_grid(2 * sigma.degree() + 16);
    let mut faces = Vec::new();
    for f in Face::BOTH {
        let mut samples = Vec::with_capacity(grid.len());
        for &x in &grid {
            let h = sigma.eval(f, x);
            let e = hermitian_eig(&symmetrize(&h))?;
            let scale = e.values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
            if e.values.iter().any(|v| v.abs() <= rank_tol * scale) {
                return Err(Error::Ellipticity(format!("principal symbol singular on face {f:?} at x = {x:.4}")));
            }
            let keep: Vec<usize> = (0..r).filter(|&i| e.values[i] > 0.0).collect();
            let v = e.vectors.select_columns(&keep);
            samples.push(&v * v.adjoint());
        }
        let mut fitted = None;
        for d in 0..=(grid.len() - 1) / 2 {
            let fit = TrigPoly::fit_uniform(&samples, d)?;
            let resid = grid.iter().zip(&samples).map(|(&x, s)| (fit.eval(x) - s).norm()).fold(0.0, f64::max);
            if resid < 1e-9 {
                fitted = Some(fit);
                break;
            }
            if d > 24 {
                break;
            }
        }
        faces.push(fitted.ok_or_else(|| {
            Error::Unsupported("spectral projection of the principal symbol is not a trigonometric polynomial".into())
        })?);
    }
    let minus = faces.pop().expect("two faces");
    let plus = faces.pop().expect("two faces");
    CircleSymbol::new(0, clean(plus), clean(minus))
}

/// Rounds coefficients below 1e-13 to zero and trims the degree.
fn clean(p: TrigPoly) -> TrigPoly {
    let terms: Vec<(i64, CMat)> = p
        .terms()
        .map(|(k, m)| {
            (
                k,
                m.map(|z| {
                    c64(if z.re.abs() < 1e-13 { 0.0 } else { z.re }, if z.im.abs() < 1e-13 { 0.0 } else { z.im })
                }),
            )
        })
        .collect();
    TrigPoly::from_terms(p.rows(), p.cols(), terms).expect("same shape").trimmed()
}

/// L̂⊥, with projections I − P_N.
pub fn orthocomplement(l: &Arc<PdoSubspace>) -> Result<PdoSubspace> {
    let symbol = l.symbol.complement();
    match &l.source {
        Source::Framed(f) => Ok(PdoSubspace::with_source(symbol, Source::Framed(f.complement()?), l.tol)),
        Source::Complement(inner) => Ok((**inner).clone()),
        _ => Ok(PdoSubspace::with_source(symbol, Source::Complement(l.clone()), l.tol)),
    }
}

/// U·L̂ for an invertible operator with even symbol.
pub fn image_subspace(l: &Arc<PdoSubspace>, u: &EvenInvertible) -> Result<PdoSubspace> {
    let tol = l.tol;
    let symbol = l.symbol.conjugated(u.multiplier(), tol.rank_tol.sqrt())?;
    match &l.source {
        Source::Framed(f) => Ok(PdoSubspace::with_source(symbol, Source::Framed(f.image(u)?), tol)),
        _ => Ok(PdoSubspace::with_source(symbol, Source::Image(u.operator(), l.clone()), tol)),
    }
}

/// L̂₁ ⊕ L̂₂ ⊕ … on the direct sum of the bundles.
pub fn direct_sum(parts: &[Arc<PdoSubspace>]) -> Result<PdoSubspace> {
    let tol = parts.first().map(|p| p.tol).unwrap_or_default();
    let syms: Vec<SubspaceSymbol> = parts.iter().map(|p| p.symbol.clone()).collect();
    let symbol = SubspaceSymbol::direct_sum(&syms, tol.rank_tol.sqrt())?;
    let framed: Option<Vec<FramedSubspace>> = parts.iter().map(|p| p.as_framed().cloned()).collect();
    Ok(match framed {
        Some(fs) => PdoSubspace::with_source(symbol, Source::Framed(FramedSubspace::direct_sum(&fs)), tol),
        None => PdoSubspace::with_source(symbol, Source::DirectSum(parts.to_vec()), tol),
    })
}

/// n copies of L̂.
pub fn repeat(l: &Arc<PdoSubspace>, n: usize) -> Result<PdoSubspace> {
    direct_sum(&vec![l.clone(); n])
}
