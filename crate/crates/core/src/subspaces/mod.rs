//! Pseudodifferential subspaces of sections over the circle.

mod coords;
mod framed;
mod lift;
mod pdo;
mod rotation;
mod symbol;

pub use coords::CoordinateSet;
pub use framed::{unitarity_defect, EvenInvertible, FramedSubspace};
pub use lift::{lift_symbol, transport_frame, Lift};
pub use pdo::{
    direct_sum, edge_mass, image_subspace, interleave_bases, nonnegative_projection, orthocomplement,
    realize_projection, repeat, spectral_subspace, PdoSubspace, Realization, Source,
};
pub use rotation::rotation_homotopy;
pub use symbol::SubspaceSymbol;

/// ind(P₂ : L̂₁ → L̂₂) for subspaces with equal symbols, stabilized over three
/// truncation scales.
pub fn relative_index(
    l1: &std::sync::Arc<PdoSubspace>,
    l2: &std::sync::Arc<PdoSubspace>,
    cfg: &crate::index::IndexConfig,
) -> crate::error::Result<i64> {
    crate::index::relative_index(l1, l2, cfg)
}
