use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use windtree::action::{InvariantSubspace, Representation};
use windtree::group::{classify, ElementTag, GroupWord, PlanarMatrix};
use windtree::kernel::{
    build_chain, eigen_directions, enumerate_kernel, evaluate_planar, limit_set_sample, KernelSample,
};
use windtree::lattice::IntMatrix;
use windtree::setup::WindTreeSetup;

fn setup() -> &'static WindTreeSetup {
    static SETUP: OnceLock<WindTreeSetup> = OnceLock::new();
    SETUP.get_or_init(|| WindTreeSetup::half().unwrap())
}

fn samples() -> &'static Vec<KernelSample> {
    static SAMPLES: OnceLock<Vec<KernelSample>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        let s = setup();
        s.representations.iter().enumerate().map(|(i, r)| enumerate_kernel(r, &s.planar, 8, i + 1)).collect()
    })
}

/// Independent planar evaluation in `[[i64; 2]; 2]`.
fn planar_i64(w: &GroupWord, planar: &[PlanarMatrix]) -> [[i64; 2]; 2] {
    let gens: Vec<[[i64; 2]; 2]> = planar.iter().map(|m| m.to_i64().unwrap()).collect();
    let inv = |m: [[i64; 2]; 2]| [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    let mut acc = [[1, 0], [0, 1]];
    for (g, s) in w.steps() {
        acc = mul(acc, if s > 0 { gens[g] } else { inv(gens[g]) });
    }
    acc
}

/// Brute force over the whole ball: kernel words deduplicated by matrix,
/// keeping the first in (length, word) order.
fn brute_force_kernel(rep: &Representation, planar: &[PlanarMatrix], max_len: usize) -> BTreeSet<[[i64; 2]; 2]> {
    let mut ball = GroupWord::ball(2, max_len);
    ball.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    ball.iter()
        .filter(|w| !w.is_identity() && rep.evaluate(w).unwrap().is_identity())
        .map(|w| planar_i64(w, planar))
        .filter(|m| !(m[0][1] == 0 && m[1][0] == 0 && m[0][0] == m[1][1] && m[0][0].abs() == 1))
        .collect()
}

#[test]
fn enumeration_matches_brute_force() {
    let s = setup();
    for (i, rep) in s.representations.iter().enumerate() {
        let sample = enumerate_kernel(rep, &s.planar, 7, i + 1);
        let found: BTreeSet<_> = sample.words.iter().map(|w| w.matrix).collect();
        assert_eq!(found.len(), sample.words.len(), "dedup by matrix");
        assert_eq!(found, brute_force_kernel(rep, &s.planar, 7));
    }
}

#[test]
fn samples_reevaluate_into_their_kernels() {
    let s = setup();
    for (sample, f) in samples().iter().zip(&s.subspaces) {
        assert!(!sample.words.is_empty());
        let inv: Vec<IntMatrix> = s.cohomology_matrices.iter().map(|m| m.inverse_unimodular().unwrap()).collect();
        for kw in &sample.words {
            assert_eq!(kw.matrix, planar_i64(&kw.word, &s.planar));
            let mut acc = IntMatrix::identity(10);
            for (g, st) in kw.word.steps() {
                acc = acc.checked_mul(if st > 0 { &s.cohomology_matrices[g] } else { &inv[g] }).unwrap();
            }
            for v in f.columns() {
                assert_eq!(acc.mul_vec(&v), v, "{} moves F", kw.word);
            }
        }
    }
}

#[test]
fn chain_stage_two_lies_in_both_kernels() {
    let s = setup();
    let reps: Vec<&Representation> = s.representations.iter().collect();
    let chain = build_chain(samples(), &reps, &s.planar, 2, 6).unwrap();
    assert_eq!(chain.len(), 2);
    assert!(!chain[1].generating_set.is_empty());
    for kw in &chain[1].generating_set {
        for rep in &reps {
            let m = rep.evaluate_big(&kw.word);
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(x.to_string(), if i == j { "1" } else { "0" });
                }
            }
        }
        assert!(!evaluate_planar(&kw.word, &s.planar).is_central());
    }
}

#[test]
fn kernels_are_normal_on_a_sample() {
    let s = setup();
    for (sample, rep) in samples().iter().zip(&s.representations) {
        for kw in sample.words.iter().take(6) {
            for g in GroupWord::ball(2, 3) {
                assert!(rep.is_trivial(&kw.word.conjugate_by(&g)));
            }
        }
    }
}

#[test]
fn eigen_directions_are_distinct_and_hyperbolic() {
    let s = setup();
    let combined = s.combined_representation().unwrap();
    let sample = enumerate_kernel(&combined, &s.planar, 10, 0);
    let dirs = eigen_directions(&sample.words);
    for (k, (d, w)) in dirs.iter().enumerate() {
        assert_eq!(classify(&w.planar()).tag, ElementTag::Hyperbolic);
        for (e, _) in &dirs[..k] {
            assert!(windtree::group::direction_distance(*d, *e) > 1e-12);
        }
    }
}

#[test]
fn trivial_representation_kernel_is_everything_noncentral() {
    let planar = vec![PlanarMatrix::from_ints(1, 2, 0, 1).unwrap(), PlanarMatrix::from_ints(1, 0, 2, 1).unwrap()];
    let rep = Representation::new(vec![IntMatrix::identity(1); 2], InvariantSubspace::full(1)).unwrap();
    let sample = enumerate_kernel(&rep, &planar, 4, 1);
    // the level-2 congruence pair generates a free group, so every word is distinct
    let expected = GroupWord::ball(2, 4).len() - 1;
    assert_eq!(sample.words.len(), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn limit_set_gaps_never_grow(take in 1usize..6, budgets in proptest::collection::vec(0usize..4, 3)) {
        let s = setup();
        let words: Vec<GroupWord> = samples()[0].words.iter().take(take).map(|w| w.word.clone()).collect();
        let mut b = budgets;
        b.sort();
        let gaps: Vec<f64> = b.iter().map(|&k| limit_set_sample(&words, &s.planar, k).max_gap).collect();
        prop_assert!(gaps.windows(2).all(|p| p[1] <= p[0]), "{:?}", gaps);
    }
}
