use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Exact number p / 2^k in canonical form: p odd, or p = 0 with k = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicRational {
    numerator: i64,
    exponent: u32,
}

impl DyadicRational {
    pub const ZERO: DyadicRational = DyadicRational { numerator: 0, exponent: 0 };

    pub fn new(numerator: i64, exponent: u32) -> Self {
        if numerator == 0 {
            return Self::ZERO;
        }
        let shift = numerator.trailing_zeros().min(exponent);
        DyadicRational { numerator: numerator >> shift, exponent: exponent - shift }
    }

    pub fn integer(n: i64) -> Self {
        Self::new(n, 0)
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / 2f64.powi(self.exponent as i32)
    }

    /// Multiplication by 2^{-k}.
    pub fn div_pow2(&self, k: u32) -> Self {
        Self::new(self.numerator, self.exponent + k)
    }

    pub fn mul_int(&self, m: i64) -> Self {
        Self::new(self.numerator * m, self.exponent)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        self.numerator >> self.exponent
    }

    /// v − floor(v), in [0, 1).
    pub fn fractional_part(&self) -> Self {
        let whole = self.floor();
        *self - Self::integer(whole)
    }

    fn aligned(a: Self, b: Self) -> (i128, i128, u32) {
        let e = a.exponent.max(b.exponent);
        let x = (a.numerator as i128) << (e - a.exponent);
        let y = (b.numerator as i128) << (e - b.exponent);
        (x, y, e)
    }

    fn from_wide(n: i128, e: u32) -> Self {
        if n == 0 {
            return Self::ZERO;
        }
        let shift = n.trailing_zeros().min(e);
        let reduced = n >> shift;
        DyadicRational { numerator: i64::try_from(reduced).expect("dyadic numerator overflow"), exponent: e - shift }
    }
}

/// v − floor(v).
pub fn fractional_part(v: DyadicRational) -> DyadicRational {
    v.fractional_part()
}

impl Add for DyadicRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (x, y, e) = Self::aligned(self, rhs);
        Self::from_wide(x + y, e)
    }
}

impl Sub for DyadicRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for DyadicRational {
    type Output = Self;
    fn neg(self) -> Self {
        DyadicRational { numerator: -self.numerator, exponent: self.exponent }
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (x, y, _) = Self::aligned(*self, *other);
        x.cmp(&y)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else if self.exponent < 63 {
            write!(f, "{}/{}", self.numerator, 1u64 << self.exponent)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        assert_eq!(DyadicRational::new(4, 3), DyadicRational::new(1, 1));
        assert_eq!(DyadicRational::new(0, 5), DyadicRational::ZERO);
        assert_eq!(DyadicRational::new(6, 0).exponent(), 0);
    }

    #[test]
    fn fractional_examples() {
        assert_eq!(DyadicRational::ZERO.fractional_part(), DyadicRational::ZERO);
        assert_eq!(DyadicRational::new(-3, 1).fractional_part(), DyadicRational::new(1, 1));
        assert_eq!(DyadicRational::new(7, 2).fractional_part(), DyadicRational::new(3, 2));
        assert_eq!(DyadicRational::new(-4, 0).fractional_part(), DyadicRational::ZERO);
    }

    #[test]
    fn display() {
        assert_eq!(DyadicRational::new(-3, 1).to_string(), "-3/2");
        assert_eq!(DyadicRational::integer(5).to_string(), "5");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn add_then_subtract_roundtrips(p in -1_000_000i64..1_000_000, e in 0u32..20,
                                        q in -1_000_000i64..1_000_000, f in 0u32..20) {
            let a = DyadicRational::new(p, e);
            let b = DyadicRational::new(q, f);
            prop_assert_eq!((a + b) - b, a);
            prop_assert_eq!(-(-a), a);
            let fr = a.fractional_part();
            prop_assert!(fr >= DyadicRational::ZERO && fr < DyadicRational::integer(1));
            prop_assert!((a - fr).is_integer());
        }
    }
}
