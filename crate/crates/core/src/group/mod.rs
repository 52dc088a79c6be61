//! Exact planar matrices, reduced words and finite group tables.

mod finite;
mod matrix;
mod word;

pub use finite::{commutator_in_intersection, FiniteGroupTable, SubgroupMask};
pub use matrix::{
    classify, commutator, direction_distance, expanding_vector, fixed_directions, parabolic_direction, ElementClass,
    ElementTag, PlanarMatrix, ANGLE_TOLERANCE,
};
pub use word::{GroupWord, Letter};
