//! Square-tiled wind-tree surfaces and the kernels of their Veech group
//! representations on integer homology.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] exact 2×2 matrices, reduced words, finite group tables;
//! * [`lattice`] integer linear algebra (Smith/Hermite forms, saturation);
//! * [`surface`] origamis, the wind-tree unfolding, homology and duality;
//! * [`action`] affine automorphisms, their homology action, invariant
//!   sublattices and restricted representations;
//! * [`kernel`] kernel word search, commutator chains and fixed-direction sets;
//! * [`sim`] the ℤ² cover, billiard simulation and diffusion slopes;
//! * [`dd`] double-double division.

pub mod action;
pub mod dd;
pub mod error;
pub mod group;
pub mod kernel;
pub mod lattice;
pub mod setup;
pub mod sim;
pub mod surface;

pub use error::{Error, Result};
