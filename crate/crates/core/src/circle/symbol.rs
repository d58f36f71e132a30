use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{CMat, TrigPoly, C64};

/// One of the two components ξ = +1, ξ = −1 of the cosphere bundle of S¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Face {
    Plus,
    Minus,
}

impl Face {
    pub const BOTH: [Face; 2] = [Face::Plus, Face::Minus];

    pub fn opposite(self) -> Face {
        match self {
            Face::Plus => Face::Minus,
            Face::Minus => Face::Plus,
        }
    }

    /// Face carrying the Fourier mode n; the zero mode belongs to ξ = +1.
    pub fn of_mode(n: i64) -> Face {
        if n >= 0 {
            Face::Plus
        } else {
            Face::Minus
        }
    }
}

/// Homogeneous symbol a(x, ξ) = a_{sign ξ}(x)·|ξ|^m with trigonometric
/// polynomial faces. Faces may be rectangular (maps between bundles of
/// different rank).
#[derive(Clone, Debug, PartialEq)]
pub struct CircleSymbol {
    order: i32,
    plus: TrigPoly,
    minus: TrigPoly,
}

impl CircleSymbol {
    pub fn new(order: i32, plus: TrigPoly, minus: TrigPoly) -> Result<Self> {
        if plus.rows() != minus.rows() || plus.cols() != minus.cols() {
            return Err(Error::Structural(format!(
                "faces have shapes {}x{} and {}x{}",
                plus.rows(),
                plus.cols(),
                minus.rows(),
                minus.cols()
            )));
        }
        Ok(CircleSymbol { order, plus, minus })
    }

    /// Symbol with equal faces.
    pub fn even(order: i32, face: TrigPoly) -> Self {
        CircleSymbol { order, plus: face.clone(), minus: face }
    }

    pub fn identity(r: usize) -> Self {
        Self::even(0, TrigPoly::identity(r))
    }

    /// Order-zero symbol equal to 1 on ξ = +1 and 0 on ξ = −1.
    pub fn hardy(r: usize) -> Self {
        CircleSymbol { order: 0, plus: TrigPoly::identity(r), minus: TrigPoly::zero(r, r) }
    }

    pub fn zero(rows: usize, cols: usize, order: i32) -> Self {
        Self::even(order, TrigPoly::zero(rows, cols))
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.plus.rows()
    }

    pub fn cols(&self) -> usize {
        self.plus.cols()
    }

    pub fn degree(&self) -> usize {
        self.plus.degree().max(self.minus.degree())
    }

    pub fn face(&self, f: Face) -> &TrigPoly {
        match f {
            Face::Plus => &self.plus,
            Face::Minus => &self.minus,
        }
    }

    pub fn eval(&self, f: Face, x: f64) -> CMat {
        self.face(f).eval(x)
    }

    pub fn with_order(&self, order: i32) -> Self {
        CircleSymbol { order, ..self.clone() }
    }

    /// Pull-back under α(x, ξ) = (x, −ξ): faces exchanged.
    pub fn antipodal(&self) -> Self {
        CircleSymbol { order: self.order, plus: self.minus.clone(), minus: self.plus.clone() }
    }

    /// Face-wise product a∘b; orders add.
    pub fn compose(&self, other: &CircleSymbol) -> Result<Self> {
        Ok(CircleSymbol {
            order: self.order + other.order,
            plus: self.plus.try_mul(&other.plus)?,
            minus: self.minus.try_mul(&other.minus)?,
        })
    }

    pub fn add(&self, other: &CircleSymbol) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::Structural(format!("cannot add symbols of orders {} and {}", self.order, other.order)));
        }
        Ok(CircleSymbol {
            order: self.order,
            plus: self.plus.try_add(&other.plus)?,
            minus: self.minus.try_add(&other.minus)?,
        })
    }

    pub fn sub(&self, other: &CircleSymbol) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        CircleSymbol { order: self.order, plus: self.plus.scale(c), minus: self.minus.scale(c) }
    }

    pub fn adjoint(&self) -> Self {
        CircleSymbol { order: self.order, plus: self.plus.adjoint(), minus: self.minus.adjoint() }
    }

    /// Applies `f` to each face.
    pub fn map_faces<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(Face, &TrigPoly) -> Result<TrigPoly>,
    {
        CircleSymbol::new(self.order, f(Face::Plus, &self.plus)?, f(Face::Minus, &self.minus)?)
    }

    pub fn block_diag(parts: &[CircleSymbol]) -> Result<Self> {
        let order = parts.first().map(|p| p.order).unwrap_or(0);
        if parts.iter().any(|p| p.order != order) {
            return Err(Error::Structural("block_diag of symbols with different orders".into()));
        }
        let plus: Vec<TrigPoly> = parts.iter().map(|p| p.plus.clone()).collect();
        let minus: Vec<TrigPoly> = parts.iter().map(|p| p.minus.clone()).collect();
        Ok(CircleSymbol { order, plus: TrigPoly::block_diag(&plus), minus: TrigPoly::block_diag(&minus) })
    }

    /// Largest face difference on a grid.
    pub fn grid_distance(&self, other: &CircleSymbol, samples: usize) -> f64 {
        self.plus.grid_distance(&other.plus, samples).max(self.minus.grid_distance(&other.minus, samples))
    }
}

/// Truncated asymptotic expansion a_m + a_{m−1} + … with orders dropping by one.
#[derive(Clone, Debug, PartialEq)]
pub struct FullSymbol {
    terms: Vec<CircleSymbol>,
}

impl FullSymbol {
    pub fn new(terms: Vec<CircleSymbol>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Structural("full symbol needs at least one term".into()))?;
        for (j, t) in terms.iter().enumerate() {
            if t.order() != first.order() - j as i32 {
                return Err(Error::Structural("orders must decrease by one".into()));
            }
            if t.rows() != first.rows() || t.cols() != first.cols() {
                return Err(Error::Structural("terms of a full symbol must share a shape".into()));
            }
        }
        Ok(FullSymbol { terms })
    }

    pub fn principal(sym: CircleSymbol) -> Self {
        FullSymbol { terms: vec![sym] }
    }

    pub fn terms(&self) -> &[CircleSymbol] {
        &self.terms
    }

    pub fn leading(&self) -> &CircleSymbol {
        &self.terms[0]
    }

    pub fn order(&self) -> i32 {
        self.terms[0].order()
    }

    pub fn rows(&self) -> usize {
        self.terms[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.terms[0].cols()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    /// Appends a lower-order term; it must have the next order down.
    pub fn push_lower(&mut self, sym: CircleSymbol) -> Result<()> {
        let expected = self.order() - self.terms.len() as i32;
        if sym.order() != expected || sym.rows() != self.rows() || sym.cols() != self.cols() {
            return Err(Error::Structural("lower-order term has the wrong order or shape".into()));
        }
        self.terms.push(sym);
        Ok(())
    }
}
