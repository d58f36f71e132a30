use std::ops::RangeInclusive;

/// Contiguous range of Fourier modes lo..=hi. Vectors over a window are laid
/// out mode-major: entry (n, i) sits at (n − lo)·r + i for fiber rank r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    /// Modes −n..=n.
    pub fn symmetric(n: i64) -> Self {
        Window { lo: -n, hi: n }
    }

    pub fn len(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn expand(&self, b: i64) -> Window {
        Window { lo: self.lo - b, hi: self.hi + b }
    }

    pub fn intersect(&self, other: &Window) -> Window {
        Window { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn modes(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Position of mode n's block for fiber rank r.
    #[inline]
    pub fn offset(&self, n: i64, r: usize) -> usize {
        debug_assert!(self.contains(n));
        (n - self.lo) as usize * r
    }

    pub fn dim(&self, r: usize) -> usize {
        self.len() * r
    }
}
