//! Kernel words of restricted representations, the commutator chain and
//! the fixed directions of kernel elements.

mod chain;
mod directions;
mod enumerate;

pub use chain::{
    build_chain, fixed_direction_set, nontrivial_commutator, KernelChain, DEFAULT_CONJUGATOR_DEPTH, DEFAULT_STAGE_LIMIT,
};
pub use directions::{eigen_directions, limit_set_sample, DirectionSet};
pub use enumerate::{enumerate_kernel, evaluate_planar, KernelSample, KernelWord};
