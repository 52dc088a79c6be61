use std::ops::Range;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use super::billiard::{simulate_with_retries, BilliardState, DisplacementSeries, WindTreeTable};
use crate::error::{Error, Result};
use crate::group::{expanding_vector, PlanarMatrix};

/// Checkpoints with smaller displacement are left out of the fit.
pub const DISPLACEMENT_FLOOR: f64 = 1.0;

/// Fewest checkpoints a fit accepts.
pub const MIN_CHECKPOINTS: usize = 10;

/// Corner-hit retries in experiment runs.
pub const DEFAULT_RETRIES: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    /// `(ln t, ln d)` for every checkpoint with positive displacement.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    /// Indices into `samples` used by the fit.
    pub window: Range<usize>,
}

/// Indices of the checkpoints in the upper half of the log-time range.
pub fn default_window(samples: &[(f64, f64)]) -> Range<usize> {
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return 0..0;
    };
    let mid = 0.5 * (first.0 + last.0);
    let start = samples.iter().position(|s| s.0 >= mid).unwrap_or(samples.len());
    start..samples.len()
}

/// Least-squares slope of `ln d` against `ln t` over the window (default:
/// upper half of the log-time range), skipping points below the floor.
pub fn estimate_slope(series: &[(f64, f64)], window: Option<Range<usize>>) -> Result<DiffusionEstimate> {
    let samples: Vec<(f64, f64)> =
        series.iter().filter(|&&(t, d)| t > 0.0 && d > 0.0).map(|&(t, d)| (t.ln(), d.ln())).collect();
    let window = window.unwrap_or_else(|| default_window(&samples));
    let pts: Vec<(f64, f64)> = samples
        .get(window.clone())
        .unwrap_or(&[])
        .iter()
        .copied()
        .filter(|&(_, ld)| ld >= DISPLACEMENT_FLOOR.ln())
        .collect();
    if pts.len() < MIN_CHECKPOINTS {
        return Err(Error::InsufficientData(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(DiffusionEstimate { samples, slope: sxy / sxx, window })
}

/// One direction's run and fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionRun {
    pub theta: f64,
    pub start: [f64; 2],
    pub series: DisplacementSeries,
    pub estimate: DiffusionEstimate,
    pub retries: usize,
}

/// A start point in the free part of cell `(0, 0)`, away from the lines.
pub fn random_start(table: &WindTreeTable, rng: &mut impl Rng) -> [f64; 2] {
    loop {
        let p = [rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)];
        if table.is_free(p[0], p[1]) {
            return p;
        }
    }
}

/// Runs from `start` in the unit direction `direction`.
pub fn run_direction(
    table: &WindTreeTable,
    start: [f64; 2],
    direction: [TwoFloat; 2],
    horizon: f64,
) -> Result<DirectionRun> {
    let state = BilliardState::new((0, 0), start, direction);
    let (series, retries) = simulate_with_retries(table, &state, horizon, DEFAULT_RETRIES)?;
    let estimate = estimate_slope(&series.envelope, None)?;
    let theta = direction[1].hi().atan2(direction[0].hi());
    Ok(DirectionRun { theta, start, series, estimate, retries })
}

/// Seeded generic directions and start points.
pub fn generic_directions(table: &WindTreeTable, count: usize, seed: u64) -> Vec<(f64, [f64; 2])> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            (theta, random_start(table, &mut rng))
        })
        .collect()
}

/// Runs every generic direction in parallel.
pub fn generic_scan(table: &WindTreeTable, count: usize, seed: u64, horizon: f64) -> Result<Vec<DirectionRun>> {
    generic_directions(table, count, seed)
        .into_par_iter()
        .map(|(theta, start)| run_direction(table, start, crate::dd::unit(theta), horizon))
        .collect()
}

/// Horizontal reference runs: along the free corridor above the obstacles
/// (ballistic, slope 1) and between two obstacles in the same row, which
/// bounces forever inside one cell and so never reaches the fit floor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlRuns {
    pub corridor: DirectionRun,
    pub bounded_start: [f64; 2],
    pub bounded: DisplacementSeries,
}

impl ControlRuns {
    /// Largest displacement the bounded run reached.
    pub fn bounded_extent(&self) -> f64 {
        self.bounded.envelope.last().map_or(0.0, |p| p.1)
    }
}

pub fn control_runs(table: &WindTreeTable, horizon: f64) -> Result<ControlRuns> {
    let (a, b) = (table.a.to_f64().unwrap_or(0.5), table.b.to_f64().unwrap_or(0.5));
    let x = a + 0.5 * (1.0 - a);
    let east = [TwoFloat::from(1.0), TwoFloat::from(0.0)];
    let corridor = run_direction(table, [x, b + 0.5 * (1.0 - b)], east, horizon)?;
    let bounded_start = [x, 0.5 * b];
    let state = BilliardState::new((0, 0), bounded_start, east);
    let (bounded, _) = simulate_with_retries(table, &state, horizon, DEFAULT_RETRIES)?;
    Ok(ControlRuns { corridor, bounded_start, bounded })
}

/// Slope in the expanding direction of a hyperbolic element.
pub fn kernel_direction_diffusion(
    table: &WindTreeTable,
    matrix: &PlanarMatrix,
    start: [f64; 2],
    horizon: f64,
) -> Result<DirectionRun> {
    let v = expanding_vector(matrix)?;
    run_direction(table, start, v, horizon)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Linear-interpolation percentile, `p ∈ [0, 100]`.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = p / 100.0 * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::super::billiard::checkpoint_schedule;
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        checkpoint_schedule(1e7).into_iter().map(|t| (t, f(t))).collect()
    }

    #[test]
    fn exact_power_laws() {
        assert!((estimate_slope(&synthetic(|t| t), None).unwrap().slope - 1.0).abs() < 1e-9);
        assert!((estimate_slope(&synthetic(|t| t.powf(2.0 / 3.0)), None).unwrap().slope - 2.0 / 3.0).abs() < 1e-6);
        assert!(estimate_slope(&synthetic(|_| 5.0), None).unwrap().slope.abs() < 1e-9);
    }

    #[test]
    fn too_few_points() {
        let s = synthetic(|_| 0.5);
        assert_eq!(estimate_slope(&s, None), Err(Error::InsufficientData(0)));
    }

    #[test]
    fn window_is_upper_half() {
        let s = synthetic(|t| t);
        let e = estimate_slope(&s, None).unwrap();
        assert_eq!(e.window.end, e.samples.len());
        assert!(e.window.start >= e.samples.len() / 2 - 1 && e.window.start <= e.samples.len() / 2 + 1);
    }

    #[test]
    fn controls_have_known_rates() {
        let c = control_runs(&WindTreeTable::half(), 1e5).unwrap();
        assert!((c.corridor.estimate.slope - 1.0).abs() < 1e-9);
        assert_eq!(c.corridor.series.reflections, 0);
        assert!(c.bounded_extent() < 1.0);
        assert!(c.bounded.reflections > 1000);
    }

    #[test]
    fn order_statistics() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(percentile(&[0.0, 10.0], 5.0), 0.5);
    }
}
