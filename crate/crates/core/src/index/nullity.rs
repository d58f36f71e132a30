use crate::circle::{CircleOperator, Window};
use crate::error::Result;
use crate::numeric::{c64, singular_values, CMat, C64};
use crate::subspaces::{edge_mass, CoordinateSet};

fn count_small(s: &[f64], thr: f64) -> usize {
    s.iter().filter(|&&x| x < thr).count()
}

fn dense_nullity(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0).max(1.0);
    count_small(&s, tol * top) + m.ncols().saturating_sub(m.nrows())
}

/// Selected rows and columns of Π_cod G Π_dom over a window pair, columns
/// scaled by the order weight. Reversed windows list modes in decreasing order.
struct Fetch<'a> {
    g: &'a CircleOperator,
    dom: &'a CoordinateSet,
    cod: &'a CoordinateSet,
    order: i32,
}

impl Fetch<'_> {
    fn indices(set: &CoordinateSet, w: Window, rev: bool) -> Vec<(usize, i64)> {
        if w.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<(usize, i64)> =
            set.indices(w).into_iter().map(|i| (i, w.lo + (i / set.rank()) as i64)).collect();
        if rev {
            out.reverse();
        }
        out
    }

    fn block(&self, rows: Window, cols: Window, rev_rows: bool, rev_cols: bool) -> (CMat, Vec<i64>, Vec<i64>) {
        let ri = Self::indices(self.cod, rows, rev_rows);
        let ci = Self::indices(self.dom, cols, rev_cols);
        let row_modes = ri.iter().map(|p| p.1).collect();
        let col_modes: Vec<i64> = ci.iter().map(|p| p.1).collect();
        if ri.is_empty() || ci.is_empty() {
            return (CMat::zeros(ri.len(), ci.len()), row_modes, col_modes);
        }
        let full = self.g.matrix(rows, cols);
        let r: Vec<usize> = ri.iter().map(|p| p.0).collect();
        let c: Vec<usize> = ci.iter().map(|p| p.0).collect();
        let mut m = full.select_rows(&r).select_columns(&c);
        if self.order != 0 {
            for (j, &md) in col_modes.iter().enumerate() {
                let s = (1.0 + md.abs() as f64).powi(-self.order);
                m.column_mut(j).scale_mut(s);
            }
        }
        (m, row_modes, col_modes)
    }
}

/// Outcome of eliminating the far columns on one side.
struct Reduced {
    /// rows of the side left after elimination, restricted to the middle columns
    residual: CMat,
    rmin: f64,
    rmax: f64,
}

const CHUNK: i64 = 8;

/// Householder elimination of the columns with |mode| > ks on one side, in
/// order of decreasing |mode|, against the rows of that side. Only a sliding
/// window of rows and columns around the current pivot is ever formed.
/// Modes are handled in virtual coordinates v (v = mode on the left, −mode on
/// the right), so both sides run in increasing v.
fn eliminate_side(f: &Fetch<'_>, n: i64, b: i64, bf: i64, ks: i64, rev: bool) -> Reduced {
    let real = |a: i64, c: i64| if rev { Window::new(-c, -a) } else { Window::new(a, c) };
    let virt = |m: i64| if rev { -m } else { m };
    let row_end = if rev { 0 } else { -1 };
    let far_hi = -ks - 1;
    let mid = Window::symmetric(ks);
    let mid_rows_from = -ks - b;

    let nmid = Fetch::indices(f.dom, mid, false).len();
    let mut work = CMat::zeros(0, nmid);
    let mut row_modes: Vec<i64> = Vec::new();
    let mut far_modes: Vec<i64> = Vec::new();
    let (mut top, mut lead) = (0usize, 0usize);
    let (mut row_hi, mut col_hi) = (-n - b - 1, -n - 1);
    let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
    let mut mid_active = false;
    let mut v: Vec<C64> = Vec::new();

    let extend = |target_r: i64,
                  work: &mut CMat,
                  row_modes: &mut Vec<i64>,
                  far_modes: &mut Vec<i64>,
                  top: &mut usize,
                  lead: &mut usize,
                  row_hi: &mut i64,
                  col_hi: &mut i64| {
        let target_c = (target_r + bf).min(far_hi).max(*col_hi);
        let first_far = far_modes.get(*lead).copied().unwrap_or(*col_hi + 1);
        let kept_far = far_modes.len() - *lead;
        let rows_new = real(*row_hi + 1, target_r);
        let (nr_far, new_row_modes, fetched_modes) = f.block(rows_new, real(first_far, target_c), rev, rev);
        let new_row_modes: Vec<i64> = new_row_modes.into_iter().map(virt).collect();
        let fetched_modes: Vec<i64> = fetched_modes.into_iter().map(virt).collect();
        let (nr_mid, _, _) = f.block(rows_new, mid, rev, false);
        let old_in_fetch = fetched_modes.iter().filter(|&&m| m <= *col_hi).count();
        let skip = old_in_fetch - kept_far;
        let added: Vec<i64> = fetched_modes[old_in_fetch..].to_vec();
        let kept_rows = work.nrows() - *top;
        let nf = kept_far + added.len();
        let mut next = CMat::zeros(kept_rows + new_row_modes.len(), nf + nmid);
        let old_far = far_modes.len();
        next.view_mut((0, 0), (kept_rows, kept_far)).copy_from(&work.view((*top, *lead), (kept_rows, kept_far)));
        next.view_mut((0, nf), (kept_rows, nmid)).copy_from(&work.view((*top, old_far), (kept_rows, nmid)));
        let nrn = new_row_modes.len();
        next.view_mut((kept_rows, 0), (nrn, nf)).copy_from(&nr_far.view((0, skip), (nrn, nf)));
        next.view_mut((kept_rows, nf), (nrn, nmid)).copy_from(&nr_mid);
        *work = next;
        let mut rm: Vec<i64> = row_modes[*top..].to_vec();
        rm.extend(new_row_modes);
        *row_modes = rm;
        let mut fm: Vec<i64> = far_modes[*lead..].to_vec();
        fm.extend(added);
        *far_modes = fm;
        *top = 0;
        *lead = 0;
        *row_hi = target_r.max(*row_hi);
        *col_hi = target_c;
    };

    loop {
        if lead == far_modes.len() {
            if col_hi >= far_hi {
                break;
            }
            let c = col_hi + 1;
            let target = ((c + bf).max(row_hi) + CHUNK).min(row_end);
            extend(target, &mut work, &mut row_modes, &mut far_modes, &mut top, &mut lead, &mut row_hi, &mut col_hi);
            continue;
        }
        let c = far_modes[lead];
        if row_hi < (c + bf).min(row_end) {
            let target = ((c + bf) + CHUNK).min(row_end);
            extend(target, &mut work, &mut row_modes, &mut far_modes, &mut top, &mut lead, &mut row_hi, &mut col_hi);
            continue;
        }
        let nr = work.nrows();
        let j = lead;
        let zero = c64(0.0, 0.0);
        let col = &work.as_slice()[j * nr..(j + 1) * nr];
        let Some(l) = (top..nr).rev().find(|&i| col[i] != zero) else {
            rmin = 0.0;
            break;
        };
        v.clear();
        v.extend_from_slice(&col[top..=l]);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        rmin = rmin.min(norm);
        rmax = rmax.max(norm);
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { c64(1.0, 0.0) };
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if row_modes[l] >= mid_rows_from {
            mid_active = true;
        }
        if vnorm2 > 0.0 {
            let beta = 2.0 / vnorm2;
            // far columns starting below row l are still zero on top..=l
            let reach = far_modes.partition_point(|&m| m <= row_modes[l] + bf);
            let nf = far_modes.len();
            let cols = ((j + 1)..reach).chain(if mid_active { nf..work.ncols() } else { nf..nf });
            let data = work.as_mut_slice();
            for k in cols {
                let seg = &mut data[k * nr + top..k * nr + l + 1];
                let dot: C64 = v.iter().zip(seg.iter()).map(|(a, b)| a.conj() * b).sum();
                if dot != zero {
                    let s = dot * beta;
                    for (x, vi) in seg.iter_mut().zip(v.iter()) {
                        *x -= vi * s;
                    }
                }
            }
        }
        top += 1;
        lead += 1;
    }
    if row_hi < row_end {
        extend(row_end, &mut work, &mut row_modes, &mut far_modes, &mut top, &mut lead, &mut row_hi, &mut col_hi);
    }
    let nf = far_modes.len();
    let rows = work.nrows() - top;
    Reduced { residual: work.view((top, nf), (rows, nmid)).into_owned(), rmin, rmax }
}

/// dim ker of Π_cod G Π_dom regarded as Im Π_dom → Im Π_cod, read off the
/// truncation with columns on modes −N..=N and rows on −N−b..=N+b (b the
/// bandwidth of G), so every column is represented in full. Columns outside
/// the localization radius are eliminated by banded QR; the dense SVD is used
/// for the small interface block, or for everything when elimination is
/// poorly conditioned.
pub fn coordinate_nullity(
    g: &CircleOperator,
    n: i64,
    dom: &CoordinateSet,
    cod: &CoordinateSet,
    tol: f64,
) -> Result<usize> {
    let b = g.bandwidth();
    let f = Fetch { g, dom, cod, order: g.order().unwrap_or(0) };
    let dense = || {
        let cols = Window::symmetric(n);
        let (m, _, _) = f.block(cols.expand(b), cols, false, false);
        dense_nullity(&m, tol)
    };
    // beyond ks columns are banded and the two sides do not share rows
    let bf = g.far_bandwidth();
    let ks = g.localization_radius().max(bf) + 1;
    if n <= ks + 2 {
        return Ok(dense());
    }
    let left = eliminate_side(&f, n, b, bf, ks, false);
    let right = eliminate_side(&f, n, b, bf, ks, true);
    let (lr, rr) = (left.residual.nrows(), right.residual.nrows());
    let mut s_mat = CMat::zeros(lr + rr, left.residual.ncols());
    s_mat.rows_mut(0, lr).copy_from(&left.residual);
    s_mat.rows_mut(lr, rr).copy_from(&right.residual);
    let s = singular_values(&s_mat);
    let scale = s.first().copied().unwrap_or(0.0).max(left.rmax).max(right.rmax).max(1.0);
    let thr = tol * scale;
    if left.rmin.min(right.rmin) < 1e3 * thr {
        return Ok(dense());
    }
    Ok(count_small(&s, thr) + s_mat.ncols().saturating_sub(s_mat.nrows()))
}

/// Near-null right singular vectors of M, as columns.
pub fn near_null(m: &CMat, tol: f64) -> Result<CMat> {
    if m.ncols() == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let h = crate::numeric::symmetrize(&(m.adjoint() * m));
    let e = crate::numeric::hermitian_eig(&h)?;
    let smax = e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    let thr = (tol * smax.max(1.0)).powi(2);
    let keep: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] < thr).collect();
    Ok(e.vectors.select_columns(&keep))
}

/// Number of vectors in span(X) that live mostly on |n| ≤ N/2.
pub fn interior_count(x: &CMat, window: Window, r: usize) -> Result<usize> {
    if x.ncols() == 0 {
        return Ok(0);
    }
    let w = crate::numeric::symmetrize(&edge_mass(x, window, r));
    let vals = crate::numeric::hermitian_eigenvalues(&w)?;
    Ok(vals.iter().filter(|&&v| v < 0.5).count())
}
