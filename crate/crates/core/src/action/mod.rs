//! Affine automorphisms, their action on (co)homology, invariant sublattices
//! and restricted representations.

mod affine;
mod subspace;

pub use affine::{
    cohomology_action, find_veech_generators, homology_action_of, is_symplectic, lift, shear_decomposition,
    AffineAutomorphism, Shear, Step, VeechGenerators,
};
pub use subspace::{
    check_tautological_exclusion, check_zero_drift, restrict, smallest_invariant_subspace, InvariantSubspace,
    Representation,
};
