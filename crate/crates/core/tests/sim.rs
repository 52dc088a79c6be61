use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use windtree::sim::{
    checkpoint_schedule, deck_translation, estimate_slope, generic_directions, random_start, simulate, BilliardState,
    CoverSpec, WindTreeTable,
};
use windtree::surface::{build_windtree_surface, homology};

fn sign(x: f64) -> i64 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// The billiard's final cell against the surface: trace the same path on the
/// compact surface, close it inside the last table cell with a path of zero
/// crossing weight and read the deck element off the homology class.
#[test]
fn final_cell_is_the_deck_translation_of_the_traced_loop() {
    let wt = build_windtree_surface(Ratio::new(1, 2), Ratio::new(1, 2)).unwrap();
    let lattice = homology(wt.surface());
    let spec = CoverSpec::windtree(&wt, &lattice).unwrap();
    let table = WindTreeTable::half();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..40 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = random_start(&table, &mut rng);
        let len = rng.gen_range(5.0..40.0);
        let state = BilliardState::at_angle((0, 0), p, theta);
        let Ok(series) = simulate(&table, &state, len) else { continue };
        let (dx, dy) = (theta.cos(), theta.sin());
        let (s0, u, w) = wt.locate(p[0], p[1], sign(dx), sign(dy)).unwrap();
        let (chain, s_end) = wt.trace(s0, u, w, dx.abs(), dy.abs(), len);

        let fin = series.final_state;
        let (fx, fy) = (fin.position[0].hi(), fin.position[1].hi());
        let (fdx, fdy) = (fin.direction[0].hi(), fin.direction[1].hi());
        let (s1, _, _) = wt.locate(fx.min(1.0 - 1e-12), fy.min(1.0 - 1e-12), sign(fdx), sign(fdy)).unwrap();
        assert_eq!(s1, s_end, "theta {theta} len {len}");

        let closing = wt.zero_weight_path(s_end, s0);
        let closed: Vec<i64> = chain.iter().zip(&closing).map(|(a, b)| a + b).collect();
        assert!(lattice.is_closed(&closed));
        let deck = deck_translation(&closed, &spec, &lattice).unwrap();
        assert_eq!(deck, vec![fin.cell.0 as i128, fin.cell.1 as i128], "theta {theta} len {len}");
        checked += 1;
    }
    assert!(checked >= 35);
}

#[test]
fn runs_are_bit_reproducible() {
    let table = WindTreeTable::half();
    let state = BilliardState::at_angle((0, 0), [0.71, 0.83], 0.9);
    let a = simulate(&table, &state, 1e5).unwrap();
    let b = simulate(&table, &state, 1e5).unwrap();
    assert_eq!(a, b);
    assert_eq!(generic_directions(&table, 8, 3), generic_directions(&table, 8, 3));
    assert_ne!(generic_directions(&table, 8, 3), generic_directions(&table, 8, 4));
}

#[test]
fn envelope_dominates_and_never_shrinks() {
    let table = WindTreeTable::half();
    let state = BilliardState::at_angle((0, 0), [0.62, 0.91], 2.2);
    let s = simulate(&table, &state, 1e5).unwrap();
    assert_eq!(s.checkpoints.len(), checkpoint_schedule(1e5).len());
    for (c, e) in s.checkpoints.iter().zip(&s.envelope) {
        assert_eq!(c.0, e.0);
        assert!(e.1 >= c.1);
    }
    assert!(s.envelope.windows(2).all(|p| p[1].1 >= p[0].1));
    assert!(s.norm_drift < 1e-30);
}

#[test]
fn power_laws_fit_their_exponent() {
    let ts = checkpoint_schedule(1e7);
    for alpha in [0.25, 0.5, 2.0 / 3.0, 1.0] {
        let series: Vec<(f64, f64)> = ts.iter().map(|&t| (t, 3.0 * t.powf(alpha))).collect();
        let e = estimate_slope(&series, None).unwrap();
        assert!((e.slope - alpha).abs() < 1e-12, "{alpha} {}", e.slope);
    }
    // everything below the floor
    let flat: Vec<(f64, f64)> = ts.iter().map(|&t| (t, 0.5)).collect();
    assert!(estimate_slope(&flat, None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversal_returns_to_the_start(
        theta in 0.0f64..std::f64::consts::TAU,
        x in 0.55f64..0.95,
        y in 0.55f64..0.95,
        len in 10.0f64..2000.0,
    ) {
        let table = WindTreeTable::half();
        let start = BilliardState::at_angle((0, 0), [x, y], theta);
        let Ok(fwd) = simulate(&table, &start, len) else { return Ok(()) };
        let Ok(back) = simulate(&table, &fwd.final_state.reversed(), len) else { return Ok(()) };
        let end = back.final_state;
        let g0 = start.global_position();
        let g1 = end.global_position();
        prop_assert!((g1[0] - g0[0]).abs().hi() < 1e-20 && (g1[1] - g0[1]).abs().hi() < 1e-20);
        prop_assert!((end.direction[0] + start.direction[0]).abs().hi() < 1e-25);
        prop_assert!((end.direction[1] + start.direction[1]).abs().hi() < 1e-25);
        prop_assert_eq!(back.reflections, fwd.reflections);
    }
}
