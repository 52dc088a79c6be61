//! The wind-tree surface with its Veech generators, cover classes and the
//! restricted representations they span, assembled in one place.

use num_rational::Ratio;

use crate::action::{
    cohomology_action, find_veech_generators, homology_action_of, restrict, smallest_invariant_subspace,
    InvariantSubspace, Representation, VeechGenerators,
};
use crate::error::Result;
use crate::group::PlanarMatrix;
use crate::lattice::IntMatrix;
use crate::surface::{build_windtree_surface, homology, CohomologyClass, HomologyLattice, WindTreeSurface};

/// Default bound on the parabolic search and on the entries of extra elements.
pub const DEFAULT_SEARCH_BOUND: i64 = 4;

#[derive(Clone, Debug)]
pub struct WindTreeSetup {
    pub windtree: WindTreeSurface,
    pub lattice: HomologyLattice,
    pub generators: VeechGenerators,
    /// Homology matrices of the parabolic pair.
    pub homology_matrices: Vec<IntMatrix>,
    /// Cohomology matrices of the parabolic pair.
    pub cohomology_matrices: Vec<IntMatrix>,
    /// Derivatives of the parabolic pair.
    pub planar: Vec<PlanarMatrix>,
    /// The cover classes `f₁`, `f₂`.
    pub classes: Vec<CohomologyClass>,
    /// Smallest invariant sublattice of each class.
    pub subspaces: Vec<InvariantSubspace>,
    /// Restriction to each sublattice.
    pub representations: Vec<Representation>,
}

impl WindTreeSetup {
    pub fn build(a: Ratio<i64>, b: Ratio<i64>, search_bound: i64) -> Result<Self> {
        let windtree = build_windtree_surface(a, b)?;
        let surface = windtree.surface();
        let lattice = homology(surface);
        let generators = find_veech_generators(surface, search_bound)?;
        let homology_matrices =
            generators.pair().iter().map(|g| homology_action_of(g, surface, &lattice)).collect::<Result<Vec<_>>>()?;
        let cohomology_matrices = homology_matrices.iter().map(cohomology_action).collect::<Result<Vec<_>>>()?;
        let planar = generators.pair().iter().map(|g| g.derivative.clone()).collect();
        let (f1, f2) = windtree.cover_classes(&lattice)?;
        let classes = vec![f1, f2];
        let subspaces = classes
            .iter()
            .map(|f| smallest_invariant_subspace(std::slice::from_ref(f), &cohomology_matrices))
            .collect::<Result<Vec<_>>>()?;
        let representations =
            subspaces.iter().map(|f| restrict(&cohomology_matrices, f)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            windtree,
            lattice,
            generators,
            homology_matrices,
            cohomology_matrices,
            planar,
            classes,
            subspaces,
            representations,
        })
    }

    /// The desk-scale table `a = b = 1/2`.
    pub fn half() -> Result<Self> {
        Self::build(Ratio::new(1, 2), Ratio::new(1, 2), DEFAULT_SEARCH_BOUND)
    }

    /// The representation on `F = F⁽¹⁾ ⊕ F⁽²⁾`, whose kernel is the
    /// intersection of the two kernels.
    pub fn combined_representation(&self) -> Result<Representation> {
        Representation::direct_sum(&self.representations.iter().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupWord;

    #[test]
    fn half_table_setup() {
        let s = WindTreeSetup::half().unwrap();
        assert_eq!((s.generators.n, s.generators.m), (2, 2));
        assert_eq!(s.planar[0], PlanarMatrix::from_ints(1, 2, 0, 1).unwrap());
        assert_eq!(s.planar[1], PlanarMatrix::from_ints(1, 0, 2, 1).unwrap());
        assert_eq!(s.lattice.rank(), 10);
        for (f, sub) in s.classes.iter().zip(&s.subspaces) {
            assert!(sub.contains(&f.coefficients));
            assert!(sub.check_saturated());
            assert_eq!(sub.rank(), 2);
        }
        let combined = s.combined_representation().unwrap();
        assert_eq!(combined.dim(), 4);
        // each generator alone acts unipotently but not trivially
        for g in 0..2 {
            assert!(!combined.is_trivial(&GroupWord::generator(g)));
        }
    }
}
