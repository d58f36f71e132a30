use crate::circle::{check_projection, classify_parity, CircleSymbol, Face, Parity};
use crate::error::{Error, Result};
use crate::numeric::{c64, TrigPoly};

/// Projection-valued symbol p(x, ±1); its range is the symbol L of a subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSymbol {
    p: CircleSymbol,
    parity: Parity,
}

impl SubspaceSymbol {
    pub fn new(p: CircleSymbol, tol: f64) -> Result<Self> {
        if p.order() != 0 {
            return Err(Error::Precondition("subspace symbols have order zero".into()));
        }
        check_projection(&p, tol)?;
        let parity = classify_parity(&p, tol)?;
        Ok(SubspaceSymbol { p, parity })
    }

    /// Identity symbol on a rank-r bundle.
    pub fn full(r: usize) -> Self {
        SubspaceSymbol { p: CircleSymbol::identity(r), parity: Parity::Even }
    }

    /// Zero symbol on a rank-r bundle.
    pub fn zero(r: usize) -> Self {
        SubspaceSymbol { p: CircleSymbol::zero(r, r, 0), parity: Parity::Even }
    }

    pub fn projection(&self) -> &CircleSymbol {
        &self.p
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Rank of the ambient bundle.
    pub fn rank(&self) -> usize {
        self.p.rows()
    }

    /// Rank of L over the given face.
    pub fn face_rank(&self, f: Face) -> usize {
        let m = self.p.eval(f, 0.0);
        (0..m.nrows()).map(|i| m[(i, i)].re).sum::<f64>().round() as usize
    }

    pub fn complement(&self) -> Self {
        let r = self.rank();
        let one = TrigPoly::identity(r);
        let p = self.p.map_faces(|_, f| one.try_add(&f.scale(c64(-1.0, 0.0)))).expect("faces share a shape");
        SubspaceSymbol { p, parity: self.parity }
    }

    pub fn antipodal(&self) -> Self {
        SubspaceSymbol { p: self.p.antipodal(), parity: self.parity }
    }

    /// Symbol of L₁ ⊕ L₂ ⊕ … on the direct sum of the bundles.
    pub fn direct_sum(parts: &[SubspaceSymbol], tol: f64) -> Result<Self> {
        let ps: Vec<CircleSymbol> = parts.iter().map(|s| s.p.clone()).collect();
        let p = CircleSymbol::block_diag(&ps)?;
        if parts.iter().all(|s| s.parity == Parity::Even) {
            Ok(SubspaceSymbol { p, parity: Parity::Even })
        } else {
            SubspaceSymbol::new(p, tol)
        }
    }

    /// Conjugates by a pointwise unitary even symbol g: p ↦ g p g*.
    pub fn conjugated(&self, g: &TrigPoly, tol: f64) -> Result<Self> {
        let gs = g.adjoint();
        let p = self.p.map_faces(|_, f| g.try_mul(f)?.try_mul(&gs))?;
        SubspaceSymbol::new(p, tol)
    }

    /// Largest face difference against another symbol.
    pub fn distance(&self, other: &SubspaceSymbol) -> f64 {
        let samples = crate::circle::symbol_grid(self.p.degree().max(other.p.degree())).len();
        self.p.grid_distance(&other.p, samples)
    }
}
