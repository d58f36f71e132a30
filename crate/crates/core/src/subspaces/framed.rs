use super::{CoordinateSet, SubspaceSymbol};
use crate::circle::{symbol_grid, CircleOperator, CircleSymbol, Face, FiniteBlock, Window};
use crate::error::{Error, Result};
use crate::numeric::{frobenius, orthonormal_columns, CMat, TrigPoly};

/// Largest deviation of g(x)*g(x) from the identity on a grid.
pub fn unitarity_defect(g: &TrigPoly) -> f64 {
    let r = g.cols();
    symbol_grid(g.degree())
        .into_iter()
        .map(|x| {
            let v = g.eval(x);
            frobenius(&(v.adjoint() * &v - CMat::identity(r, r)))
        })
        .fold(0.0, f64::max)
}

/// Invertible operator M_g (I + J) with g a unitary trigonometric polynomial
/// and J a smoothing block. Its principal symbol g is even.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenInvertible {
    g: TrigPoly,
    j: Option<FiniteBlock>,
}

impl EvenInvertible {
    pub fn new(g: TrigPoly, j: Option<FiniteBlock>, tol: f64) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::Structural("multiplier must be square".into()));
        }
        let defect = unitarity_defect(&g);
        if defect > tol {
            return Err(Error::Precondition(format!("multiplier is not unitary (defect {defect:e})")));
        }
        if let Some(b) = &j {
            if b.rows_rank() != g.rows() || b.cols_rank() != g.rows() {
                return Err(Error::Structural("smoothing block has the wrong rank".into()));
            }
            b.inverse_correction()?;
        }
        Ok(EvenInvertible { g, j })
    }

    pub fn multiplier(&self) -> &TrigPoly {
        &self.g
    }

    pub fn smoothing(&self) -> Option<&FiniteBlock> {
        self.j.as_ref()
    }

    pub fn operator(&self) -> CircleOperator {
        let m = CircleOperator::pdo(CircleSymbol::even(0, self.g.clone()));
        match &self.j {
            Some(b) => m.compose(b.identity_plus()),
            None => m,
        }
    }

    pub fn symbol(&self) -> CircleSymbol {
        CircleSymbol::even(0, self.g.clone())
    }
}

/// Subspace F(Im Π_C) where F = M_W (I + K) is invertible, W a unitary
/// trigonometric polynomial and Π_C the coordinate projection onto C.
#[derive(Clone, Debug, PartialEq)]
pub struct FramedSubspace {
    w: TrigPoly,
    k: Option<FiniteBlock>,
    coords: CoordinateSet,
}

impl FramedSubspace {
    pub fn new(w: TrigPoly, k: Option<FiniteBlock>, coords: CoordinateSet, tol: f64) -> Result<Self> {
        if w.rows() != w.cols() || w.rows() != coords.rank() {
            return Err(Error::Structural("frame and coordinate set have different ranks".into()));
        }
        let defect = unitarity_defect(&w);
        if defect > tol {
            return Err(Error::Precondition(format!("frame multiplier is not unitary (defect {defect:e})")));
        }
        if let Some(b) = &k {
            if b.rows_rank() != w.rows() || b.cols_rank() != w.rows() {
                return Err(Error::Structural("smoothing block has the wrong rank".into()));
            }
            b.inverse_correction()?;
        }
        Ok(FramedSubspace { w, k, coords })
    }

    /// Coordinate subspace with the trivial frame.
    pub fn coordinate(coords: CoordinateSet) -> Self {
        FramedSubspace { w: TrigPoly::identity(coords.rank()), k: None, coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.rank()
    }

    pub fn multiplier(&self) -> &TrigPoly {
        &self.w
    }

    pub fn smoothing(&self) -> Option<&FiniteBlock> {
        self.k.as_ref()
    }

    pub fn coords(&self) -> &CoordinateSet {
        &self.coords
    }

    /// F = M_W (I + K).
    pub fn frame_operator(&self) -> CircleOperator {
        let m = CircleOperator::pdo(CircleSymbol::even(0, self.w.clone()));
        match &self.k {
            Some(b) => m.compose(b.identity_plus()),
            None => m,
        }
    }

    /// F⁻¹ = (I + K)⁻¹ M_{W*}.
    pub fn inverse_frame_operator(&self) -> Result<CircleOperator> {
        let m = CircleOperator::pdo(CircleSymbol::even(0, self.w.adjoint()));
        Ok(match &self.k {
            Some(b) => b.inverse_correction()?.identity_plus().compose(m),
            None => m,
        })
    }

    /// F Π_C F⁻¹: an idempotent with range L̂.
    pub fn projection_operator(&self) -> Result<CircleOperator> {
        Ok(self.frame_operator().compose(self.coords.projection_operator()).compose(self.inverse_frame_operator()?))
    }

    pub fn symbol(&self, tol: f64) -> Result<SubspaceSymbol> {
        let ws = self.w.adjoint();
        let mask = self.coords.symbol();
        let p = mask.map_faces(|_, f| self.w.try_mul(f)?.try_mul(&ws))?;
        SubspaceSymbol::new(p, tol)
    }

    /// Orthogonal complement M_W (I + K*)⁻¹ (Im Π_{C′}).
    pub fn complement(&self) -> Result<Self> {
        let k = match &self.k {
            Some(b) => Some(b.inverse_correction()?.adjoint()),
            None => None,
        };
        Ok(FramedSubspace { w: self.w.clone(), k, coords: self.coords.complement() })
    }

    /// U·L̂ for U = M_g (I + J): the frame becomes M_{gW}(I + M_W* J M_W)(I + K).
    pub fn image(&self, u: &EvenInvertible) -> Result<Self> {
        let w = u.g.try_mul(&self.w)?;
        let k = match (&u.j, &self.k) {
            (None, k) => k.clone(),
            (Some(j), k) => {
                let radius = j.radius() + self.w.degree() as i64;
                let conj = CircleOperator::pdo(CircleSymbol::even(0, self.w.adjoint()))
                    .compose(CircleOperator::Local(j.clone()))
                    .compose(CircleOperator::pdo(CircleSymbol::even(0, self.w.clone())));
                let win = Window::symmetric(radius);
                let r = self.rank();
                let jp = FiniteBlock::new(radius, r, r, conj.matrix(win, win))?;
                Some(match k {
                    Some(k) => jp.compose_identity_plus(k)?,
                    None => jp,
                })
            }
        };
        Ok(FramedSubspace { w, k, coords: self.coords.clone() })
    }

    pub fn direct_sum(parts: &[FramedSubspace]) -> Self {
        let ws: Vec<TrigPoly> = parts.iter().map(|p| p.w.clone()).collect();
        let coords: Vec<CoordinateSet> = parts.iter().map(|p| p.coords.clone()).collect();
        let k = if parts.iter().any(|p| p.k.is_some()) {
            let blocks: Vec<FiniteBlock> =
                parts.iter().map(|p| p.k.clone().unwrap_or_else(|| FiniteBlock::zero(0, p.rank(), p.rank()))).collect();
            Some(FiniteBlock::block_diag(&blocks))
        } else {
            None
        };
        FramedSubspace { w: TrigPoly::block_diag(&ws), k, coords: CoordinateSet::direct_sum(&coords) }
    }

    /// Orthonormal frame of L on a face: the columns of W in the face mask.
    pub fn face_frame(&self, f: Face) -> TrigPoly {
        self.w.select_columns(&self.coords.mask_columns(f))
    }

    /// Orthonormal basis of the truncated frame columns on modes −N..=N.
    pub fn basis(&self, n: i64, tol: f64) -> CMat {
        let win = Window::symmetric(n);
        let f = self.frame_operator().matrix(win, win);
        let cols = self.coords.indices(win);
        orthonormal_columns(&f.select_columns(&cols), tol)
    }
}
