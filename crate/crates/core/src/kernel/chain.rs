use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::enumerate::{evaluate_planar, KernelSample, KernelWord};
use crate::action::Representation;
use crate::error::{Error, Result};
use crate::group::{
    classify, direction_distance, fixed_directions, parabolic_direction, ElementTag, GroupWord, PlanarMatrix,
    ANGLE_TOLERANCE,
};

/// Documented default for the truncated normal closure.
pub const DEFAULT_CONJUGATOR_DEPTH: usize = 2;

/// Generators kept from each stage when forming the next one.
pub const DEFAULT_STAGE_LIMIT: usize = 6;

/// One stage `H_j` of the commutator chain, truncated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelChain {
    pub stage: usize,
    pub generating_set: Vec<KernelWord>,
    pub conjugator_depth: usize,
}

/// Builds every stage of `H₁ = K₁`, `H_j = ⟨[H_{j−1}, K_j]⟩`, the normal
/// closure truncated to conjugators of length at most `conjugator_depth`.
///
/// Only the first `stage_limit` words of each stage and sample take part in
/// the commutators. `reps[i]` is the representation whose kernel sample
/// `samples[i]` is; every survivor at stage `j` is checked against the
/// first `j` of them.
pub fn build_chain(
    samples: &[KernelSample],
    reps: &[&Representation],
    planar: &[PlanarMatrix],
    conjugator_depth: usize,
    stage_limit: usize,
) -> Result<Vec<KernelChain>> {
    if samples.is_empty() || samples.len() != reps.len() {
        return Err(Error::InvalidParameter("one representation per kernel sample is required".into()));
    }
    if let Some(j) = samples.iter().position(|s| s.words.is_empty()) {
        return Err(Error::EmptyStage(j + 1));
    }
    let conjugators = GroupWord::ball(planar.len(), conjugator_depth);
    let mut stages = vec![KernelChain { stage: 1, generating_set: samples[0].words.clone(), conjugator_depth }];
    for j in 1..samples.len() {
        let previous = &stages[j - 1].generating_set;
        let mut seen: BTreeSet<[[i64; 2]; 2]> = BTreeSet::new();
        let mut next = Vec::new();
        for h in previous.iter().take(stage_limit) {
            for k in samples[j].words.iter().take(stage_limit) {
                let c = h.word.commutator(&k.word);
                for g in &conjugators {
                    let w = c.conjugate_by(g);
                    let m = evaluate_planar(&w, planar);
                    if m.is_central() {
                        continue;
                    }
                    for (i, rep) in reps.iter().enumerate().take(j + 1) {
                        if !rep.is_trivial(&w) {
                            return Err(Error::ContainmentViolated(i + 1));
                        }
                    }
                    let Some(kw) = KernelWord::from_word(w, planar) else { continue };
                    if seen.insert(kw.matrix) {
                        next.push(kw);
                    }
                }
            }
        }
        if next.is_empty() {
            return Err(Error::EmptyStage(j + 1));
        }
        next.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
        stages.push(KernelChain { stage: j + 1, generating_set: next, conjugator_depth });
    }
    Ok(stages)
}

/// Fixed boundary directions of an infinite-order element.
pub fn fixed_direction_set(m: &PlanarMatrix) -> Result<Vec<f64>> {
    let class = classify(m);
    if !class.is_infinite_order() {
        return Err(Error::Elliptic);
    }
    match class.tag {
        ElementTag::Hyperbolic => {
            let (e, c) = fixed_directions(m)?;
            Ok(vec![e, c])
        }
        _ => Ok(parabolic_direction(m).into_iter().collect()),
    }
}

/// The commutator `[h, k]` of two infinite-order elements without a common
/// fixed direction, which is then never `±I`.
pub fn nontrivial_commutator(
    h: &GroupWord,
    k: &GroupWord,
    planar: &[PlanarMatrix],
) -> Result<(GroupWord, PlanarMatrix)> {
    let mh = evaluate_planar(h, planar);
    let mk = evaluate_planar(k, planar);
    let dh = fixed_direction_set(&mh)?;
    let dk = fixed_direction_set(&mk)?;
    if dh.iter().any(|&a| dk.iter().any(|&b| direction_distance(a, b) < ANGLE_TOLERANCE)) {
        return Err(Error::SharedFixedPoint);
    }
    let w = h.commutator(k);
    let m = evaluate_planar(&w, planar);
    if m.is_central() {
        // excluded by the fixed-point argument; reaching this is a bug
        return Err(Error::SharedFixedPoint);
    }
    Ok((w, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::InvariantSubspace;
    use crate::lattice::IntMatrix;

    fn unit_pair() -> Vec<PlanarMatrix> {
        vec![PlanarMatrix::from_ints(1, 1, 0, 1).unwrap(), PlanarMatrix::from_ints(1, 0, 1, 1).unwrap()]
    }

    #[test]
    fn standard_parabolics_do_not_commute() {
        let (w, m) = nontrivial_commutator(&GroupWord::generator(0), &GroupWord::generator(1), &unit_pair()).unwrap();
        assert_eq!(w.len(), 4);
        assert!(!m.is_central());
    }

    #[test]
    fn powers_share_fixed_points() {
        let k = GroupWord::from_steps(&[(0, 1), (1, 1)]);
        let h = GroupWord::from_steps(&[(0, 1), (1, 1)].repeat(5));
        assert_eq!(nontrivial_commutator(&h, &k, &unit_pair()), Err(Error::SharedFixedPoint));
    }

    #[test]
    fn elliptic_input_rejected() {
        // T L⁻¹ T has trace 0
        let e = GroupWord::from_steps(&[(0, 1), (1, -1), (0, 1)]);
        assert_eq!(nontrivial_commutator(&e, &GroupWord::generator(0), &unit_pair()), Err(Error::Elliptic));
    }

    #[test]
    fn single_stage_is_the_sample() {
        let rep = Representation::new(vec![IntMatrix::identity(1); 2], InvariantSubspace::full(1)).unwrap();
        let planar = unit_pair();
        let sample = super::super::enumerate_kernel(&rep, &planar, 2, 1);
        let chain = build_chain(std::slice::from_ref(&sample), &[&rep], &planar, 2, 4).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain[0].generating_set, sample.words);
    }

    #[test]
    fn self_commutators_are_discarded() {
        let rep = Representation::new(vec![IntMatrix::identity(1); 2], InvariantSubspace::full(1)).unwrap();
        let planar = unit_pair();
        let w = KernelWord::from_word(GroupWord::generator(0), &planar).unwrap();
        let sample = KernelSample { subspace_index: 1, words: vec![w], max_word_length: 1 };
        let err = build_chain(&[sample.clone(), sample], &[&rep, &rep], &planar, 1, 4).unwrap_err();
        assert_eq!(err, Error::EmptyStage(2));
    }
}
