//! Elliptic operators in subspaces on model geometries.
//!
//! The circle S¹ carries pseudodifferential subspaces, their Fredholm
//! indices, the dimension functional d and mod-n indices; the flat 3-torus
//! carries the spectrum of dδ − δd and its η-invariant. Data-parallel kernels
//! run on rayon with the `parallel` feature and sequentially without it.

pub mod circle;
pub mod error;
pub mod eta;
pub mod exec;
pub mod index;
pub mod kzn;
pub mod numeric;
pub mod subspaces;
pub mod suite;
pub mod torus;

pub use error::{Error, Result};
pub use exec::Execution;
