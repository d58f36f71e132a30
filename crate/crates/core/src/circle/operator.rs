use super::{CircleSymbol, Face, FullSymbol, Window};
use crate::error::{Error, Result};
use crate::numeric::{CMat, C64};

/// Finite matrix acting on modes |n| ≤ radius (a smoothing operator).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteBlock {
    radius: i64,
    rows_rank: usize,
    cols_rank: usize,
    /// mode-major matrix over Window::symmetric(radius)
    matrix: CMat,
}

impl FiniteBlock {
    pub fn new(radius: i64, rows_rank: usize, cols_rank: usize, matrix: CMat) -> Result<Self> {
        let w = Window::symmetric(radius);
        if radius < 0 || matrix.nrows() != w.dim(rows_rank) || matrix.ncols() != w.dim(cols_rank) {
            return Err(Error::Structural(format!(
                "finite block of radius {radius} must be {}x{}",
                w.dim(rows_rank),
                w.dim(cols_rank)
            )));
        }
        Ok(FiniteBlock { radius, rows_rank, cols_rank, matrix })
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn rows_rank(&self) -> usize {
        self.rows_rank
    }

    pub fn cols_rank(&self) -> usize {
        self.cols_rank
    }

    pub fn zero(radius: i64, rows_rank: usize, cols_rank: usize) -> Self {
        let w = Window::symmetric(radius);
        FiniteBlock { radius, rows_rank, cols_rank, matrix: CMat::zeros(w.dim(rows_rank), w.dim(cols_rank)) }
    }

    /// The same operator described on a larger radius.
    pub fn embed(&self, radius: i64) -> Self {
        if radius <= self.radius {
            return self.clone();
        }
        let w = Window::symmetric(radius);
        let own = Window::symmetric(self.radius);
        let mut m = CMat::zeros(w.dim(self.rows_rank), w.dim(self.cols_rank));
        m.view_mut((w.offset(own.lo, self.rows_rank), w.offset(own.lo, self.cols_rank)), self.matrix.shape())
            .copy_from(&self.matrix);
        FiniteBlock { radius, rows_rank: self.rows_rank, cols_rank: self.cols_rank, matrix: m }
    }

    pub fn adjoint(&self) -> Self {
        FiniteBlock {
            radius: self.radius,
            rows_rank: self.cols_rank,
            cols_rank: self.rows_rank,
            matrix: self.matrix.adjoint(),
        }
    }

    /// K′ with (I + K)⁻¹ = I + K′; fails when I + K is singular.
    pub fn inverse_correction(&self) -> Result<Self> {
        if self.rows_rank != self.cols_rank {
            return Err(Error::Structural("I + K needs a square block".into()));
        }
        let n = self.matrix.nrows();
        let id = CMat::identity(n, n);
        let a = &id + &self.matrix;
        let smin = crate::numeric::singular_values(&a).last().copied().unwrap_or(1.0);
        if smin < 1e-8 {
            return Err(Error::Precondition(format!("I + K is singular (smallest singular value {smin:e})")));
        }
        let inv = a.try_inverse().ok_or_else(|| Error::Precondition("I + K is singular".into()))?;
        Ok(FiniteBlock { matrix: inv - id, ..self.clone() })
    }

    /// K₁ + K₂ + K₁K₂, so that (I + K₁)(I + K₂) = I + result.
    pub fn compose_identity_plus(&self, other: &FiniteBlock) -> Result<Self> {
        if self.rows_rank != self.cols_rank || other.rows_rank != self.rows_rank || other.cols_rank != self.cols_rank {
            return Err(Error::Structural("blocks act on different bundles".into()));
        }
        let radius = self.radius.max(other.radius);
        let a = self.embed(radius);
        let b = other.embed(radius);
        let m = &a.matrix + &b.matrix + &a.matrix * &b.matrix;
        Ok(FiniteBlock { matrix: m, ..a })
    }

    pub fn block_diag(parts: &[FiniteBlock]) -> Self {
        let radius = parts.iter().map(|b| b.radius).max().unwrap_or(0);
        let rr: usize = parts.iter().map(|b| b.rows_rank).sum();
        let cr: usize = parts.iter().map(|b| b.cols_rank).sum();
        let w = Window::symmetric(radius);
        let mut m = CMat::zeros(w.dim(rr), w.dim(cr));
        let (mut r0, mut c0) = (0, 0);
        for b in parts {
            let e = b.embed(radius);
            for n in w.modes() {
                for k in w.modes() {
                    let src =
                        e.matrix.view((w.offset(n, b.rows_rank), w.offset(k, b.cols_rank)), (b.rows_rank, b.cols_rank));
                    m.view_mut((w.offset(n, rr) + r0, w.offset(k, cr) + c0), (b.rows_rank, b.cols_rank))
                        .copy_from(&src);
                }
            }
            r0 += b.rows_rank;
            c0 += b.cols_rank;
        }
        FiniteBlock { radius, rows_rank: rr, cols_rank: cr, matrix: m }
    }

    /// I + K as an operator.
    pub fn identity_plus(&self) -> CircleOperator {
        CircleOperator::identity(self.rows_rank).plus(CircleOperator::Local(self.clone()))
    }
}

/// A banded operator on sections over S¹, assembled from quantized symbols,
/// smoothing blocks, sums, products, adjoints and fiberwise direct sums. It can
/// be truncated to any pair of mode windows; products are evaluated exactly by
/// padding the intermediate window with the bandwidth of the right factor.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleOperator {
    Pdo(FullSymbol),
    Local(FiniteBlock),
    Sum(Vec<CircleOperator>),
    /// Product([A, B, C]) = A ∘ B ∘ C.
    Product(Vec<CircleOperator>),
    Adjoint(Box<CircleOperator>),
    Scaled(C64, Box<CircleOperator>),
    /// Fiberwise direct sum over E₁ ⊕ E₂ ⊕ … .
    BlockDiag(Vec<CircleOperator>),
}

/// Weight |n|^k of an order-k term at column mode n. At n = 0 the weight is 1
/// for k = 0 and 0 otherwise.
#[inline]
pub fn mode_weight(n: i64, k: i32) -> f64 {
    if n == 0 {
        if k == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (n.unsigned_abs() as f64).powi(k)
    }
}

impl CircleOperator {
    pub fn pdo(sym: CircleSymbol) -> Self {
        CircleOperator::Pdo(FullSymbol::principal(sym))
    }

    pub fn identity(r: usize) -> Self {
        Self::pdo(CircleSymbol::identity(r))
    }

    pub fn compose(self, right: CircleOperator) -> Self {
        let mut factors = match self {
            CircleOperator::Product(f) => f,
            other => vec![other],
        };
        match right {
            CircleOperator::Product(f) => factors.extend(f),
            other => factors.push(other),
        }
        CircleOperator::Product(factors)
    }

    pub fn plus(self, other: CircleOperator) -> Self {
        let mut parts = match self {
            CircleOperator::Sum(p) => p,
            other => vec![other],
        };
        parts.push(other);
        CircleOperator::Sum(parts)
    }

    pub fn adjoint(self) -> Self {
        match self {
            CircleOperator::Adjoint(inner) => *inner,
            other => CircleOperator::Adjoint(Box::new(other)),
        }
    }

    pub fn scaled(self, c: C64) -> Self {
        CircleOperator::Scaled(c, Box::new(self))
    }

    pub fn rows_rank(&self) -> usize {
        match self {
            CircleOperator::Pdo(f) => f.rows(),
            CircleOperator::Local(b) => b.rows_rank,
            CircleOperator::Sum(p) => p.first().map(|o| o.rows_rank()).unwrap_or(0),
            CircleOperator::Product(f) => f.first().map(|o| o.rows_rank()).unwrap_or(0),
            CircleOperator::Adjoint(o) => o.cols_rank(),
            CircleOperator::Scaled(_, o) => o.rows_rank(),
            CircleOperator::BlockDiag(p) => p.iter().map(|o| o.rows_rank()).sum(),
        }
    }

    pub fn cols_rank(&self) -> usize {
        match self {
            CircleOperator::Pdo(f) => f.cols(),
            CircleOperator::Local(b) => b.cols_rank,
            CircleOperator::Sum(p) => p.first().map(|o| o.cols_rank()).unwrap_or(0),
            CircleOperator::Product(f) => f.last().map(|o| o.cols_rank()).unwrap_or(0),
            CircleOperator::Adjoint(o) => o.rows_rank(),
            CircleOperator::Scaled(_, o) => o.cols_rank(),
            CircleOperator::BlockDiag(p) => p.iter().map(|o| o.cols_rank()).sum(),
        }
    }

    /// Checks that ranks chain correctly through sums and products.
    pub fn validate(&self) -> Result<()> {
        match self {
            CircleOperator::Sum(p) => {
                for o in p {
                    o.validate()?;
                    if o.rows_rank() != self.rows_rank() || o.cols_rank() != self.cols_rank() {
                        return Err(Error::Structural("sum of operators with different shapes".into()));
                    }
                }
            }
            CircleOperator::Product(f) => {
                for o in f {
                    o.validate()?;
                }
                for w in f.windows(2) {
                    if w[0].cols_rank() != w[1].rows_rank() {
                        return Err(Error::Structural("product of non-composable operators".into()));
                    }
                }
            }
            CircleOperator::Adjoint(o) | CircleOperator::Scaled(_, o) => o.validate()?,
            CircleOperator::BlockDiag(p) => {
                for o in p {
                    o.validate()?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Largest |n − n′| over nonzero entries.
    pub fn bandwidth(&self) -> i64 {
        match self {
            CircleOperator::Pdo(f) => f.max_degree() as i64,
            CircleOperator::Local(b) => 2 * b.radius,
            CircleOperator::Sum(p) | CircleOperator::BlockDiag(p) => p.iter().map(|o| o.bandwidth()).max().unwrap_or(0),
            CircleOperator::Product(f) => f.iter().map(|o| o.bandwidth()).sum(),
            CircleOperator::Adjoint(o) | CircleOperator::Scaled(_, o) => o.bandwidth(),
        }
    }

    /// Largest |n − n′| over entries whose column lies outside the
    /// localization radius.
    pub fn far_bandwidth(&self) -> i64 {
        match self {
            CircleOperator::Pdo(f) => f.max_degree() as i64,
            CircleOperator::Local(_) => 0,
            CircleOperator::Sum(p) | CircleOperator::BlockDiag(p) => {
                p.iter().map(|o| o.far_bandwidth()).max().unwrap_or(0)
            }
            CircleOperator::Product(f) => f.iter().map(|o| o.far_bandwidth()).sum(),
            CircleOperator::Adjoint(o) | CircleOperator::Scaled(_, o) => o.far_bandwidth(),
        }
    }

    /// Radius beyond which columns only see the quantized-symbol parts.
    pub fn localization_radius(&self) -> i64 {
        match self {
            CircleOperator::Pdo(_) => 0,
            CircleOperator::Local(b) => b.radius,
            CircleOperator::Sum(p) | CircleOperator::BlockDiag(p) => {
                p.iter().map(|o| o.localization_radius()).max().unwrap_or(0)
            }
            CircleOperator::Product(f) => {
                let far: i64 = f.iter().map(|o| o.far_bandwidth()).sum();
                f.iter().map(|o| o.localization_radius()).max().unwrap_or(0) + far
            }
            CircleOperator::Adjoint(o) => o.localization_radius() + o.far_bandwidth(),
            CircleOperator::Scaled(_, o) => o.localization_radius(),
        }
    }

    /// Order of the principal part; None for purely smoothing operators.
    pub fn order(&self) -> Option<i32> {
        match self {
            CircleOperator::Pdo(f) => Some(f.order()),
            CircleOperator::Local(_) => None,
            CircleOperator::Sum(p) | CircleOperator::BlockDiag(p) => p.iter().filter_map(|o| o.order()).max(),
            CircleOperator::Product(f) => {
                let mut total = 0;
                for o in f {
                    total += o.order()?;
                }
                Some(total)
            }
            CircleOperator::Adjoint(o) | CircleOperator::Scaled(_, o) => o.order(),
        }
    }

    /// Principal symbol; smoothing parts contribute nothing.
    pub fn principal_symbol(&self) -> Result<CircleSymbol> {
        let zero = |order| CircleSymbol::zero(self.rows_rank(), self.cols_rank(), order);
        match self {
            CircleOperator::Pdo(f) => Ok(f.leading().clone()),
            CircleOperator::Local(_) => Ok(zero(i32::MIN / 4)),
            CircleOperator::Sum(p) => {
                let order = match self.order() {
                    Some(o) => o,
                    None => return Ok(zero(i32::MIN / 4)),
                };
                let mut acc = zero(order);
                for o in p.iter().filter(|o| o.order() == Some(order)) {
                    acc = acc.add(&o.principal_symbol()?)?;
                }
                Ok(acc)
            }
            CircleOperator::Product(f) => {
                if self.order().is_none() {
                    return Ok(zero(i32::MIN / 4));
                }
                let mut acc: Option<CircleSymbol> = None;
                for o in f {
                    let s = o.principal_symbol()?;
                    acc = Some(match acc {
                        None => s,
                        Some(a) => a.compose(&s)?,
                    });
                }
                acc.ok_or_else(|| Error::Structural("empty product".into()))
            }
            CircleOperator::Adjoint(o) => Ok(o.principal_symbol()?.adjoint()),
            CircleOperator::Scaled(c, o) => Ok(o.principal_symbol()?.scale(*c)),
            CircleOperator::BlockDiag(p) => {
                let order = self.order().unwrap_or(i32::MIN / 4);
                let parts = p
                    .iter()
                    .map(|o| {
                        if o.order() == Some(order) {
                            o.principal_symbol()
                        } else {
                            Ok(CircleSymbol::zero(o.rows_rank(), o.cols_rank(), order))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                CircleSymbol::block_diag(&parts)
            }
        }
    }

    /// Exact truncation to rows over `rows` and columns over `cols`.
    pub fn matrix(&self, rows: Window, cols: Window) -> CMat {
        let (ro, co) = (self.rows_rank(), self.cols_rank());
        match self {
            CircleOperator::Pdo(f) => pdo_matrix(f, rows, cols),
            CircleOperator::Local(b) => local_matrix(b, rows, cols),
            CircleOperator::Sum(p) => {
                let mut out = CMat::zeros(rows.dim(ro), cols.dim(co));
                for o in p {
                    out += o.matrix(rows, cols);
                }
                out
            }
            CircleOperator::Product(f) => product_matrix(f, rows, cols),
            CircleOperator::Adjoint(o) => o.matrix(cols, rows).adjoint(),
            CircleOperator::Scaled(c, o) => o.matrix(rows, cols) * *c,
            CircleOperator::BlockDiag(p) => {
                let mut out = CMat::zeros(rows.dim(ro), cols.dim(co));
                let (mut r0, mut c0) = (0, 0);
                for o in p {
                    let (pr, pc) = (o.rows_rank(), o.cols_rank());
                    let m = o.matrix(rows, cols);
                    for (a, _) in rows.modes().enumerate() {
                        for (b, _) in cols.modes().enumerate() {
                            for i in 0..pr {
                                for j in 0..pc {
                                    out[(a * ro + r0 + i, b * co + c0 + j)] = m[(a * pr + i, b * pc + j)];
                                }
                            }
                        }
                    }
                    r0 += pr;
                    c0 += pc;
                }
                out
            }
        }
    }
}

fn pdo_matrix(f: &FullSymbol, rows: Window, cols: Window) -> CMat {
    let (ro, co) = (f.rows(), f.cols());
    let mut out = CMat::zeros(rows.dim(ro), cols.dim(co));
    for m in cols.modes() {
        let face = Face::of_mode(m);
        let cj = cols.offset(m, co);
        for term in f.terms() {
            let w = mode_weight(m, term.order());
            if w == 0.0 {
                continue;
            }
            for (k, c) in term.face(face).terms() {
                let n = m + k;
                if !rows.contains(n) {
                    continue;
                }
                let ri = rows.offset(n, ro);
                let mut blk = out.view_mut((ri, cj), (ro, co));
                blk.zip_apply(c, |a, b| *a += b * w);
            }
        }
    }
    out
}

fn local_matrix(b: &FiniteBlock, rows: Window, cols: Window) -> CMat {
    let (ro, co) = (b.rows_rank, b.cols_rank);
    let own = Window::symmetric(b.radius);
    let mut out = CMat::zeros(rows.dim(ro), cols.dim(co));
    let rr = own.intersect(&rows);
    let cc = own.intersect(&cols);
    for n in rr.modes() {
        for m in cc.modes() {
            let src = b.matrix.view((own.offset(n, ro), own.offset(m, co)), (ro, co));
            out.view_mut((rows.offset(n, ro), cols.offset(m, co)), (ro, co)).copy_from(&src);
        }
    }
    out
}

fn product_matrix(factors: &[CircleOperator], rows: Window, cols: Window) -> CMat {
    let k = factors.len();
    if k == 0 {
        return CMat::zeros(0, 0);
    }
    if k == 1 {
        return factors[0].matrix(rows, cols);
    }
    // left bandwidth budget: how far the remaining left factors can move a mode
    let bws: Vec<i64> = factors.iter().map(|o| o.bandwidth()).collect();
    let mut left_budget = vec![0i64; k + 1];
    for i in 0..k {
        left_budget[i + 1] = left_budget[i] + bws[i];
    }
    let mut cur_window = cols;
    let last = &factors[k - 1];
    let mut mid = cols.expand(bws[k - 1]).intersect(&rows.expand(left_budget[k - 1]));
    let mut acc = last.matrix(mid, cur_window);
    let mut acc_band = bws[k - 1];
    cur_window = mid;
    for i in (0..k - 1).rev() {
        let f = &factors[i];
        let target = if i == 0 { rows } else { mid.expand(bws[i]).intersect(&rows.expand(left_budget[i])) };
        let fm = f.matrix(target, cur_window);
        acc = banded_mul(
            &fm,
            &acc,
            target,
            cur_window,
            cols,
            f.rows_rank(),
            f.cols_rank(),
            last.cols_rank(),
            bws[i],
            acc_band,
        );
        acc_band += bws[i];
        mid = target;
        cur_window = target;
    }
    acc
}

/// C = A·B where A couples modes within `band_a` and B within `band_b`.
#[allow(clippy::too_many_arguments)]
fn banded_mul(
    a: &CMat,
    b: &CMat,
    rows: Window,
    mid: Window,
    cols: Window,
    ra: usize,
    rm: usize,
    rc: usize,
    band_a: i64,
    band_b: i64,
) -> CMat {
    let mut out = CMat::zeros(rows.dim(ra), cols.dim(rc));
    for m in cols.modes() {
        let cj = cols.offset(m, rc);
        let jw = Window::new(m - band_b, m + band_b).intersect(&mid);
        for j in jw.modes() {
            let bj = mid.offset(j, rm);
            let bblk = b.view((bj, cj), (rm, rc));
            if bblk.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            let iw = Window::new(j - band_a, j + band_a).intersect(&rows);
            if iw.is_empty() {
                continue;
            }
            let ai = rows.offset(iw.lo, ra);
            let h = iw.dim(ra);
            let ablk = a.view((ai, bj), (h, rm));
            let mut oblk = out.view_mut((ai, cj), (h, rc));
            oblk.gemm(C64::new(1.0, 0.0), &ablk, &bblk, C64::new(1.0, 0.0));
        }
    }
    out
}
