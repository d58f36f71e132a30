use std::collections::BTreeSet;

use crate::circle::{CircleOperator, CircleSymbol, Face, FiniteBlock, Window};
use crate::error::{Error, Result};
use crate::numeric::{c64, CMat, TrigPoly};

/// A set of basis vectors e_n ⊗ f_i of ℓ²(ℤ, ℂʳ): on mode n, coordinate i is
/// included iff the mask of the face carrying n includes i, toggled by a
/// finite list of flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSet {
    rank: usize,
    plus: Vec<bool>,
    minus: Vec<bool>,
    flips: BTreeSet<(i64, usize)>,
}

impl CoordinateSet {
    pub fn new(plus: Vec<bool>, minus: Vec<bool>, flips: BTreeSet<(i64, usize)>) -> Result<Self> {
        let rank = plus.len();
        if minus.len() != rank {
            return Err(Error::Structural("face masks have different lengths".into()));
        }
        if let Some(&(n, i)) = flips.iter().find(|&&(_, i)| i >= rank) {
            return Err(Error::Structural(format!("flip ({n}, {i}) outside rank {rank}")));
        }
        Ok(CoordinateSet { rank, plus, minus, flips })
    }

    pub fn full(r: usize) -> Self {
        CoordinateSet { rank: r, plus: vec![true; r], minus: vec![true; r], flips: BTreeSet::new() }
    }

    pub fn empty(r: usize) -> Self {
        CoordinateSet { rank: r, plus: vec![false; r], minus: vec![false; r], flips: BTreeSet::new() }
    }

    /// Modes n ≥ 0 of a line.
    pub fn hardy() -> Self {
        CoordinateSet { rank: 1, plus: vec![true], minus: vec![false], flips: BTreeSet::new() }
    }

    /// Modes n ≥ k of a line.
    pub fn hardy_from(k: i64) -> Self {
        let flips = if k >= 0 { (0..k).map(|n| (n, 0)).collect() } else { (k..0).map(|n| (n, 0)).collect() };
        CoordinateSet { rank: 1, plus: vec![true], minus: vec![false], flips }
    }

    /// Same masks on both faces.
    pub fn even(mask: Vec<bool>) -> Self {
        CoordinateSet { rank: mask.len(), plus: mask.clone(), minus: mask, flips: BTreeSet::new() }
    }

    pub fn with_flips(mut self, flips: impl IntoIterator<Item = (i64, usize)>) -> Result<Self> {
        for f in flips {
            if f.1 >= self.rank {
                return Err(Error::Structural(format!("flip {f:?} outside rank {}", self.rank)));
            }
            if !self.flips.remove(&f) {
                self.flips.insert(f);
            }
        }
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mask(&self, f: Face) -> &[bool] {
        match f {
            Face::Plus => &self.plus,
            Face::Minus => &self.minus,
        }
    }

    pub fn flips(&self) -> &BTreeSet<(i64, usize)> {
        &self.flips
    }

    pub fn contains(&self, n: i64, i: usize) -> bool {
        self.mask(Face::of_mode(n))[i] ^ self.flips.contains(&(n, i))
    }

    /// Largest |n| among flipped modes, or −1 without flips.
    pub fn flip_radius(&self) -> i64 {
        self.flips.iter().map(|&(n, _)| n.abs()).max().unwrap_or(-1)
    }

    pub fn face_count(&self, f: Face) -> usize {
        self.mask(f).iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        CoordinateSet {
            rank: self.rank,
            plus: self.plus.iter().map(|b| !b).collect(),
            minus: self.minus.iter().map(|b| !b).collect(),
            flips: self.flips.clone(),
        }
    }

    pub fn direct_sum(parts: &[CoordinateSet]) -> Self {
        let mut out = CoordinateSet::empty(0);
        for p in parts {
            let base = out.rank;
            out.plus.extend_from_slice(&p.plus);
            out.minus.extend_from_slice(&p.minus);
            out.flips.extend(p.flips.iter().map(|&(n, i)| (n, i + base)));
            out.rank += p.rank;
        }
        out
    }

    /// Positions of the selected coordinates in the mode-major layout of `w`.
    pub fn indices(&self, w: Window) -> Vec<usize> {
        let mut out = Vec::new();
        for n in w.modes() {
            for i in 0..self.rank {
                if self.contains(n, i) {
                    out.push(w.offset(n, self.rank) + i);
                }
            }
        }
        out
    }

    /// Diagonal symbol diag(mask₊), diag(mask₋).
    pub fn symbol(&self) -> CircleSymbol {
        let diag = |m: &[bool]| {
            TrigPoly::constant(CMat::from_fn(self.rank, self.rank, |i, j| {
                if i == j && m[i] {
                    c64(1.0, 0.0)
                } else {
                    c64(0.0, 0.0)
                }
            }))
        };
        CircleSymbol::new(0, diag(&self.plus), diag(&self.minus)).expect("masks share a rank")
    }

    /// Π_C as an operator: the quantized masks plus a diagonal block
    /// correcting the flipped coordinates.
    pub fn projection_operator(&self) -> CircleOperator {
        let masks = CircleOperator::pdo(self.symbol());
        let radius = self.flip_radius();
        if radius < 0 {
            return masks;
        }
        let w = Window::symmetric(radius);
        let mut m = CMat::zeros(w.dim(self.rank), w.dim(self.rank));
        for &(n, i) in &self.flips {
            let k = w.offset(n, self.rank) + i;
            m[(k, k)] = if self.mask(Face::of_mode(n))[i] { c64(-1.0, 0.0) } else { c64(1.0, 0.0) };
        }
        let block = FiniteBlock::new(radius, self.rank, self.rank, m).expect("window-sized block");
        masks.plus(CircleOperator::Local(block))
    }

    /// Column indices of the mask on a face.
    pub fn mask_columns(&self, f: Face) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.mask(f)[i]).collect()
    }
}
