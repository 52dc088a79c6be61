use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{content, IntMatrix};
use crate::surface::{CohomologyClass, HomologyLattice, WindTreeSurface};

/// A `ℤ^d` cover of the compact surface, given by `d` cohomology classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub classes: Vec<CohomologyClass>,
    pub drift_checked: bool,
}

impl CoverSpec {
    /// Validates primitivity and rational independence.
    pub fn new(classes: Vec<CohomologyClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidCover("no classes".into()));
        }
        for (i, c) in classes.iter().enumerate() {
            if content(&c.coefficients) != 1 {
                return Err(Error::InvalidCover(format!("class {} is not primitive", i + 1)));
            }
        }
        let rank = classes[0].coefficients.len();
        let m = IntMatrix::from_cols(rank, &classes.iter().map(|c| c.coefficients.clone()).collect::<Vec<_>>());
        if m.rank() != classes.len() {
            return Err(Error::InvalidCover("classes are linearly dependent".into()));
        }
        Ok(Self { classes, drift_checked: false })
    }

    /// No validation; for deliberately degenerate fixtures.
    pub fn unchecked(classes: Vec<CohomologyClass>) -> Self {
        Self { classes, drift_checked: false }
    }

    /// Marks the spec drift-checked when every class has zero holonomy.
    pub fn check_drift(&mut self, lattice: &HomologyLattice) -> Result<bool> {
        for c in &self.classes {
            let (x, y) = lattice.holonomy(c)?;
            if x != num_rational::Ratio::from_integer(0) || y != num_rational::Ratio::from_integer(0) {
                self.drift_checked = false;
                return Ok(false);
            }
        }
        self.drift_checked = true;
        Ok(true)
    }

    /// The wind-tree cover: horizontal and vertical cell crossings.
    pub fn windtree(windtree: &WindTreeSurface, lattice: &HomologyLattice) -> Result<Self> {
        let (f1, f2) = windtree.cover_classes(lattice)?;
        let mut spec = Self::new(vec![f1, f2])?;
        spec.check_drift(lattice)?;
        Ok(spec)
    }
}

/// The deck element `(⟨f₁, c⟩, …, ⟨f_d, c⟩)` picked up by a lift of `c`.
pub fn deck_translation(chain: &[i64], spec: &CoverSpec, lattice: &HomologyLattice) -> Result<Vec<i128>> {
    let coords = lattice.coordinates(chain)?;
    spec.classes.iter().map(|f| f.pair(&coords)).collect()
}

/// Pairing matrix `M[i][j] = ⟨f_j, γ_i⟩` of two cycles against two classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCheck {
    pub matrix: [[i128; 2]; 2],
    pub determinant: i128,
    pub rank_two: bool,
}

pub fn rank2_check(spec: &CoverSpec, strips: [&[i64]; 2], lattice: &HomologyLattice) -> Result<RankCheck> {
    if spec.classes.len() != 2 {
        return Err(Error::InvalidCover(format!("{} classes, expected 2", spec.classes.len())));
    }
    let mut matrix = [[0i128; 2]; 2];
    for (i, g) in strips.iter().enumerate() {
        let d = deck_translation(g, spec, lattice)?;
        matrix[i] = [d[0], d[1]];
    }
    let determinant = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    Ok(RankCheck { matrix, determinant, rank_two: determinant != 0 })
}

/// Deck coordinates picked up along straight-line flow on the compact
/// surface, sampled at the given path lengths. Each class is represented by
/// a fixed cochain, so the values are those of a lift to the cover up to a
/// bounded error.
pub fn cover_flow_displacement(
    windtree: &WindTreeSurface,
    lattice: &HomologyLattice,
    spec: &CoverSpec,
    start: (usize, f64, f64),
    direction: (f64, f64),
    lengths: &[f64],
) -> Result<Vec<Vec<i128>>> {
    let cochains = spec.classes.iter().map(|c| lattice.cochain_of(c)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(lengths.len());
    for &len in lengths {
        let (chain, _) = windtree.trace(start.0, start.1, start.2, direction.0, direction.1, len);
        out.push(cochains.iter().map(|w| chain.iter().zip(w).map(|(&a, &b)| a as i128 * b as i128).sum()).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_windtree_surface, homology};
    use num_rational::Ratio;

    fn half() -> (WindTreeSurface, HomologyLattice) {
        let wt = build_windtree_surface(Ratio::new(1, 2), Ratio::new(1, 2)).unwrap();
        let h = homology(wt.surface());
        (wt, h)
    }

    #[test]
    fn zero_chain_and_dual_of_f1() {
        let (wt, h) = half();
        let spec = CoverSpec::windtree(&wt, &h).unwrap();
        assert!(spec.drift_checked);
        assert_eq!(deck_translation(&[0; 24], &spec, &h).unwrap(), vec![0, 0]);
        let pd = h.poincare_dual(&spec.classes[0]).unwrap();
        let d = deck_translation(&h.chain_of(&pd), &spec, &h).unwrap();
        assert_eq!(d[0], 0);
        // f₂(x) = ⟨PD(f₂), x⟩, computed through the intersection form
        let pd2 = h.poincare_dual(&spec.classes[1]).unwrap();
        assert_eq!(d[1], h.intersect(&pd2, &pd).unwrap());
    }

    #[test]
    fn strips_give_rank_two() {
        let (wt, h) = half();
        let spec = CoverSpec::windtree(&wt, &h).unwrap();
        let (gh, gv) = (wt.horizontal_strip(), wt.vertical_strip());
        let r = rank2_check(&spec, [&gh, &gv], &h).unwrap();
        assert!(r.rank_two);
        let same = rank2_check(&spec, [&gh, &gh], &h).unwrap();
        assert_eq!(same.determinant, 0);
        let twin = CoverSpec::unchecked(vec![spec.classes[0].clone(), spec.classes[0].clone()]);
        assert_eq!(rank2_check(&twin, [&gh, &gv], &h).unwrap().determinant, 0);
        assert!(CoverSpec::new(twin.classes.clone()).is_err());
    }

    #[test]
    fn drift_grows_linearly_only_with_nonzero_holonomy() {
        let (wt, h) = half();
        let spec = CoverSpec::windtree(&wt, &h).unwrap();
        let drifted_class = h.real_period_class();
        let mut drifted = CoverSpec::unchecked(vec![drifted_class]);
        assert!(!drifted.check_drift(&h).unwrap());
        let dir = (0.3f64.cos(), 0.3f64.sin());
        let start = (0, 0.123, 0.456);
        let lengths = [1e3, 2e3, 4e3];
        let flat = cover_flow_displacement(&wt, &h, &spec, start, dir, &lengths).unwrap();
        let lin = cover_flow_displacement(&wt, &h, &drifted, start, dir, &lengths).unwrap();
        let rate = |v: &Vec<Vec<i128>>, k: usize| v[k].iter().map(|x| x.abs()).max().unwrap() as f64 / lengths[k];
        assert!(rate(&lin, 2) > 0.1, "drifted cover should move linearly");
        assert!((rate(&lin, 2) - rate(&lin, 1)).abs() < 0.05);
        assert!(rate(&flat, 2) < 0.05, "zero-drift cover stays sublinear");
    }
}
