use super::{CircleOperator, FullSymbol, Window};
use crate::error::{Error, Result};
use crate::numeric::{is_hermitian, CMat};

/// Where a truncated matrix came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    Symbol { order: i32, degree: usize },
    Explicit,
}

/// Finite section of an operator on modes −N..=N.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    pub n: i64,
    pub rows_rank: usize,
    pub cols_rank: usize,
    pub order: i32,
    pub matrix: CMat,
    pub provenance: Provenance,
}

impl TruncatedOperator {
    pub fn window(&self) -> Window {
        Window::symmetric(self.n)
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.rows_rank == self.cols_rank && is_hermitian(&self.matrix, tol)
    }

    /// Block coupling row mode `n` to column mode `m`.
    pub fn block(&self, n: i64, m: i64) -> CMat {
        let w = self.window();
        self.matrix
            .view((w.offset(n, self.rows_rank), w.offset(m, self.cols_rank)), (self.rows_rank, self.cols_rank))
            .into_owned()
    }
}

/// Fourier truncation of Op(f): column mode n′ is acted on by the face
/// sign(n′) with weight |n′|^k and the j-th coefficient lands on mode n′ + j.
pub fn quantize(f: &FullSymbol, n: i64) -> Result<TruncatedOperator> {
    let need = 2 * f.max_degree() as i64;
    if n <= need {
        return Err(Error::TruncationTooSmall { n, need });
    }
    let w = Window::symmetric(n);
    let matrix = CircleOperator::Pdo(f.clone()).matrix(w, w);
    Ok(TruncatedOperator {
        n,
        rows_rank: f.rows(),
        cols_rank: f.cols(),
        order: f.order(),
        matrix,
        provenance: Provenance::Symbol { order: f.order(), degree: f.max_degree() },
    })
}

/// Square truncation of an arbitrary operator expression.
pub fn truncate(op: &CircleOperator, n: i64) -> Result<TruncatedOperator> {
    op.validate()?;
    if n < 1 {
        return Err(Error::TruncationTooSmall { n, need: 0 });
    }
    let w = Window::symmetric(n);
    Ok(TruncatedOperator {
        n,
        rows_rank: op.rows_rank(),
        cols_rank: op.cols_rank(),
        order: op.order().unwrap_or(0),
        matrix: op.matrix(w, w),
        provenance: Provenance::Explicit,
    })
}
