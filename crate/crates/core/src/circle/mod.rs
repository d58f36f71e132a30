//! Classical pseudodifferential calculus on the circle: two-faced symbols,
//! Fourier truncation, parity and ellipticity tests.

mod operator;
mod parity;
mod quantize;
pub mod serial;
mod symbol;
mod window;

pub use operator::{mode_weight, CircleOperator, FiniteBlock};
pub use parity::{
    check_projection, check_transmission_parity, classify_parity, ellipticity_check, projection_range, symbol_grid,
    EllipticityReport, Parity,
};
pub use quantize::{quantize, truncate, Provenance, TruncatedOperator};
pub use symbol::{CircleSymbol, Face, FullSymbol};
pub use window::Window;

/// α*: exchanges the two faces.
pub fn antipodal_pullback(s: &CircleSymbol) -> CircleSymbol {
    s.antipodal()
}
