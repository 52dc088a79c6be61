use std::sync::OnceLock;

use num_rational::Ratio;
use proptest::prelude::*;

use windtree::action::{check_tautological_exclusion, check_zero_drift, is_symplectic, lift};
use windtree::group::{GroupWord, PlanarMatrix};
use windtree::lattice::IntMatrix;
use windtree::setup::WindTreeSetup;

fn setup() -> &'static WindTreeSetup {
    static SETUP: OnceLock<WindTreeSetup> = OnceLock::new();
    SETUP.get_or_init(|| WindTreeSetup::half().unwrap())
}

fn word(steps: &[(usize, i64)]) -> GroupWord {
    GroupWord::from_steps(steps)
}

fn words(max_len: usize) -> impl Strategy<Value = GroupWord> {
    proptest::collection::vec((0usize..2, prop_oneof![Just(1i64), Just(-1i64)]), 0..=max_len).prop_map(|s| word(&s))
}

fn ambient(m: &[IntMatrix], inv: &[IntMatrix], w: &GroupWord) -> IntMatrix {
    let mut acc = IntMatrix::identity(m[0].rows());
    for (g, s) in w.steps() {
        acc = acc.checked_mul(if s > 0 { &m[g] } else { &inv[g] }).unwrap();
    }
    acc
}

#[test]
fn generators_are_symplectic_automorphisms() {
    let s = setup();
    let surface = s.windtree.surface();
    let j = s.lattice.intersection_matrix();
    for (g, m) in s.generators.pair().iter().zip(&s.homology_matrices) {
        assert!(g.is_automorphism_of(surface));
        assert!(g.inverse().is_automorphism_of(surface));
        assert!(is_symplectic(m, j));
        assert_eq!(m.det(), 1);
    }
    for e in &s.generators.extra {
        assert!(e.is_automorphism_of(surface));
    }
}

#[test]
fn inverse_automorphism_inverts_the_action() {
    let s = setup();
    let surface = s.windtree.surface();
    for (g, m) in s.generators.pair().iter().zip(&s.homology_matrices) {
        let mi = windtree::action::homology_action_of(&g.inverse(), surface, &s.lattice).unwrap();
        assert!(m.checked_mul(&mi).unwrap().is_identity());
    }
}

#[test]
fn holonomy_follows_the_derivative() {
    let s = setup();
    for (m, d) in s.homology_matrices.iter().zip(&s.planar) {
        let d = d.to_i64().unwrap();
        for k in 0..s.lattice.rank() {
            let mut e = vec![0i128; s.lattice.rank()];
            e[k] = 1;
            let (x, y) = s.lattice.cycle_holonomy(&e);
            let (ix, iy) = s.lattice.cycle_holonomy(&m.mul_vec(&e));
            let r = |v: i64| Ratio::from_integer(v);
            assert_eq!(ix, r(d[0][0]) * x + r(d[0][1]) * y);
            assert_eq!(iy, r(d[1][0]) * x + r(d[1][1]) * y);
        }
    }
}

#[test]
fn lift_agrees_with_the_found_generators() {
    let s = setup();
    let t2 = PlanarMatrix::from_ints(1, 2, 0, 1).unwrap();
    let l = lift(s.windtree.surface(), &t2).unwrap().expect("T² stabilises the surface");
    let m = windtree::action::homology_action_of(&l, s.windtree.surface(), &s.lattice).unwrap();
    assert_eq!(m, s.homology_matrices[0]);
    // T itself does not
    let t = PlanarMatrix::from_ints(1, 1, 0, 1).unwrap();
    assert!(lift(s.windtree.surface(), &t).unwrap().is_none());
}

#[test]
fn subspaces_are_saturated_drift_free_and_exclude_the_tautological_plane() {
    let s = setup();
    for (f, class) in s.subspaces.iter().zip(&s.classes) {
        assert!(f.check_saturated());
        assert!(f.contains(&class.coefficients));
        assert!(check_zero_drift(f, &s.lattice).unwrap());
        assert!(check_tautological_exclusion(f, &s.lattice));
        // rank over ℚ, independently of the Hermite basis
        let cols = f.columns();
        let rows: Vec<Vec<f64>> = (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i] as f64).collect()).collect();
        assert_eq!(float_rank(rows), 2);
    }
    let both = s.subspaces[0].sum(&s.subspaces[1]);
    assert_eq!(both.rank(), 4);
}

fn float_rank(mut m: Vec<Vec<f64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else { break };
        if m[p][c].abs() < 1e-9 {
            continue;
        }
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let f = m[r][c] / m[rank][c];
            for k in 0..cols {
                m[r][k] -= f * m[rank][k];
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn invariant_subspace_is_smallest() {
    let s = setup();
    // the orbit of f under a few words already spans F
    for (f, class) in s.subspaces.iter().zip(&s.classes) {
        let g0 = &s.cohomology_matrices[0];
        let g1 = &s.cohomology_matrices[1];
        let orbit = [class.coefficients.clone(), g0.mul_vec(&class.coefficients), g1.mul_vec(&class.coefficients)];
        let rows: Vec<Vec<f64>> = (0..10).map(|i| orbit.iter().map(|c| c[i] as f64).collect()).collect();
        assert_eq!(float_rank(rows), f.rank());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_commutes_with_inclusion(w in words(8)) {
        let s = setup();
        let inv: Vec<IntMatrix> = s.cohomology_matrices.iter().map(|m| m.inverse_unimodular().unwrap()).collect();
        let big = ambient(&s.cohomology_matrices, &inv, &w);
        for (f, rep) in s.subspaces.iter().zip(&s.representations) {
            let small = rep.evaluate(&w).unwrap();
            let basis = IntMatrix::from_cols(10, &f.columns());
            prop_assert_eq!(big.checked_mul(&basis).unwrap(), basis.checked_mul(&small).unwrap());
        }
    }

    #[test]
    fn cohomology_action_preserves_the_pairing(
        w in words(6),
        f in proptest::collection::vec(-3i128..=3, 10),
        x in proptest::collection::vec(-3i128..=3, 10),
    ) {
        let s = setup();
        let hinv: Vec<IntMatrix> = s.homology_matrices.iter().map(|m| m.inverse_unimodular().unwrap()).collect();
        let cinv: Vec<IntMatrix> = s.cohomology_matrices.iter().map(|m| m.inverse_unimodular().unwrap()).collect();
        let mh = ambient(&s.homology_matrices, &hinv, &w);
        let mc = ambient(&s.cohomology_matrices, &cinv, &w);
        let dot = |a: &[i128], b: &[i128]| a.iter().zip(b).map(|(p, q)| p * q).sum::<i128>();
        prop_assert_eq!(dot(&mc.mul_vec(&f), &mh.mul_vec(&x)), dot(&f, &x));
        prop_assert!(is_symplectic(&mh, s.lattice.intersection_matrix()));
    }

    #[test]
    fn word_and_its_inverse_cancel(w in words(8)) {
        let s = setup();
        for rep in &s.representations {
            let a = rep.evaluate(&w).unwrap();
            let b = rep.evaluate(&w.inverse()).unwrap();
            prop_assert!(a.checked_mul(&b).unwrap().is_identity());
        }
    }
}
