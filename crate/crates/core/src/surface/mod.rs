//! Origamis, the wind-tree unfolding, and their integer homology.

mod homology;
mod origami;
pub mod windtree;

pub use homology::{homology, Chain, CohomologyClass, Holonomy, HomologyLattice};
pub use origami::{
    compose, invert, is_permutation, EdgeGluing, Permutation, SurfaceFile, TranslationSurface, Vertex,
    SURFACE_FILE_VERSION,
};
pub use windtree::{build_windtree_surface, WindTreeSurface};
