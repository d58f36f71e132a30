//! Dense complex linear algebra, trigonometric polynomial matrices, winding
//! numbers and exact dyadic arithmetic.

mod dyadic;
mod linalg;
mod tolerance;
mod trig;
mod winding;

pub use dyadic::{fractional_part, DyadicRational};
pub use linalg::{
    adjoint, column_norm_max, frobenius, hermitian_eig, hermitian_eigenvalues, identity, is_hermitian,
    orthonormal_columns, singular_values, stable_rank, symmetrize, zeros, Eigen,
};
pub use tolerance::ToleranceConfig;
pub use trig::TrigPoly;
pub use winding::{det_loop_winding, winding_number, winding_of_scalar_samples};

use num_complex::Complex;

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;
/// Dense complex matrix (column major).
pub type CMat = nalgebra::DMatrix<C64>;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// e^{i k x}.
#[inline]
pub fn cis(angle: f64) -> C64 {
    Complex::new(angle.cos(), angle.sin())
}
