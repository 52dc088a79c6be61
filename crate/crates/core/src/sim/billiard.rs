//! Event-driven billiard in the periodic wind-tree table.
//!
//! Obstacles are the squares `[m, m+a] × [n, n+b]`, `(m, n) ∈ ℤ²`. Inside a
//! unit cell the particle only meets the lines `x ∈ {0, a, 1}` and
//! `y ∈ {0, b, 1}`; a vertical line is a wall exactly when the crossing
//! height lies in `(0, b)`, and symmetrically for horizontal lines. Every
//! line intersection is an obstacle corner, so two simultaneous events mean
//! a corner hit.
//!
//! Positions and path length are double-double; direction magnitudes never
//! change, only their signs.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Two events closer than this (in path length) count as a corner hit.
pub const CORNER_TOLERANCE: f64 = 1e-24;

/// Unit-norm tolerance for starting directions.
pub const UNIT_TOLERANCE: f64 = 1e-14;

/// First checkpoint.
pub const FIRST_CHECKPOINT: f64 = 10.0;

/// Checkpoints per doubling of path length.
pub const CHECKPOINTS_PER_OCTAVE: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindTreeTable {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
}

impl WindTreeTable {
    pub fn new(a: Ratio<i64>, b: Ratio<i64>) -> Result<Self> {
        let unit = |x: Ratio<i64>| x > Ratio::from_integer(0) && x < Ratio::from_integer(1);
        if !unit(a) || !unit(b) {
            return Err(Error::InvalidParameter(format!("obstacle sides {a}, {b} must lie in (0, 1)")));
        }
        Ok(Self { a, b })
    }

    pub fn half() -> Self {
        Self { a: Ratio::new(1, 2), b: Ratio::new(1, 2) }
    }

    /// Obstacle half-widths `a/2`, `b/2`; obstacle centres sit at
    /// `(a/2, b/2) + ℤ²`.
    pub fn half_widths(&self) -> (Ratio<i64>, Ratio<i64>) {
        (self.a / 2, self.b / 2)
    }

    fn sides(&self) -> (TwoFloat, TwoFloat) {
        let q = |r: Ratio<i64>| crate::dd::div(TwoFloat::from(*r.numer() as f64), TwoFloat::from(*r.denom() as f64));
        (q(self.a), q(self.b))
    }

    /// Whether a point of the unit cell lies outside the open obstacle.
    pub fn is_free(&self, x: f64, y: f64) -> bool {
        let (a, b) = (self.a.to_f64().unwrap_or(0.0), self.b.to_f64().unwrap_or(0.0));
        !(x > 0.0 && x < a && y > 0.0 && y < b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilliardState {
    pub cell: (i64, i64),
    /// Position within the cell, in `[0, 1]²`.
    pub position: [TwoFloat; 2],
    pub direction: [TwoFloat; 2],
}

impl BilliardState {
    pub fn new(cell: (i64, i64), position: [f64; 2], direction: [TwoFloat; 2]) -> Self {
        Self { cell, position: [TwoFloat::from(position[0]), TwoFloat::from(position[1])], direction }
    }

    /// Unit direction at the given angle, evaluated in double-double.
    pub fn at_angle(cell: (i64, i64), position: [f64; 2], theta: f64) -> Self {
        Self::new(cell, position, crate::dd::unit(theta))
    }

    pub fn global_position(&self) -> [TwoFloat; 2] {
        [self.position[0] + self.cell.0 as f64, self.position[1] + self.cell.1 as f64]
    }

    pub fn reversed(&self) -> Self {
        Self { direction: [-self.direction[0], -self.direction[1]], ..*self }
    }
}

/// Result of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSeries {
    /// `(t_k, d(t_k))`.
    pub checkpoints: Vec<(f64, f64)>,
    /// `(t_k, max_{s ≤ t_k} d(s))`.
    pub envelope: Vec<(f64, f64)>,
    pub reflections: u64,
    pub final_state: BilliardState,
    /// Largest deviation of `|direction|²` from one.
    pub norm_drift: f64,
}

/// Checkpoint path lengths up to `horizon`.
pub fn checkpoint_schedule(horizon: f64) -> Vec<f64> {
    (0..)
        .map(|k| FIRST_CHECKPOINT * 2f64.powf(k as f64 / CHECKPOINTS_PER_OCTAVE as f64))
        .take_while(|&t| t <= horizon)
        .collect()
}

fn norm_deviation(d: &[TwoFloat; 2]) -> f64 {
    (d[0] * d[0] + d[1] * d[1] - 1.0).hi().abs()
}

/// Runs the billiard for total path length `horizon`.
pub fn simulate(table: &WindTreeTable, start: &BilliardState, horizon: f64) -> Result<DisplacementSeries> {
    simulate_until(table, start, horizon, &checkpoint_schedule(horizon))
}

/// Runs the billiard recording displacement at the given increasing path lengths.
pub fn simulate_until(
    table: &WindTreeTable,
    start: &BilliardState,
    horizon: f64,
    checkpoints: &[f64],
) -> Result<DisplacementSeries> {
    if norm_deviation(&start.direction) > UNIT_TOLERANCE {
        return Err(Error::NonUnitDirection);
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter("horizon must be positive".into()));
    }
    let (a, b) = table.sides();
    let zero = TwoFloat::from(0.0);
    let one = TwoFloat::from(1.0);
    let [mut x, mut y] = start.position;
    let (mut cx, mut cy) = start.cell;
    let (mut sx, mut sy) = (start.direction[0] >= zero, start.direction[1] >= zero);
    let (mx, my) = (start.direction[0].abs(), start.direction[1].abs());
    let inf = TwoFloat::from(f64::INFINITY);
    let (ix, iy) =
        (if mx > zero { crate::dd::div(one, mx) } else { inf }, if my > zero { crate::dd::div(one, my) } else { inf });
    let origin = start.global_position();

    let mut t = TwoFloat::from(0.0);
    let mut reflections = 0u64;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut envelope = Vec::with_capacity(checkpoints.len());
    // squared distance is convex along a segment, so its maximum over the
    // path is attained at event points or at the checkpoint itself
    let mut max_sq = 0.0f64;
    let mut next_cp = 0;
    let h = TwoFloat::from(horizon);

    let dir = |s: bool, m: TwoFloat| if s { m } else { -m };
    loop {
        let tx_target = if sx {
            if x < a {
                a
            } else {
                one
            }
        } else if x > a {
            a
        } else {
            zero
        };
        let ty_target = if sy {
            if y < b {
                b
            } else {
                one
            }
        } else if y > b {
            b
        } else {
            zero
        };
        let dtx = if mx > zero { (tx_target - x).abs() * ix } else { inf };
        let dty = if my > zero { (ty_target - y).abs() * iy } else { inf };
        let step = if dtx < dty { dtx } else { dty };

        // checkpoints inside this free segment
        while next_cp < checkpoints.len() && TwoFloat::from(checkpoints[next_cp]) <= t + step {
            let tau = TwoFloat::from(checkpoints[next_cp]) - t;
            let gx = x + dir(sx, mx) * tau + cx as f64 - origin[0];
            let gy = y + dir(sy, my) * tau + cy as f64 - origin[1];
            let sq = (gx * gx + gy * gy).hi();
            out.push((checkpoints[next_cp], sq.sqrt()));
            envelope.push((checkpoints[next_cp], max_sq.max(sq).sqrt()));
            next_cp += 1;
        }
        if t + step >= h {
            let tau = h - t;
            x += dir(sx, mx) * tau;
            y += dir(sy, my) * tau;
            break;
        }
        if (dtx - dty).abs() < TwoFloat::from(CORNER_TOLERANCE) {
            return Err(Error::CornerHit(t.hi()));
        }
        t += step;
        {
            let gx = (x + dir(sx, mx) * step + cx as f64 - origin[0]).hi();
            let gy = (y + dir(sy, my) * step + cy as f64 - origin[1]).hi();
            max_sq = max_sq.max(gx * gx + gy * gy);
        }
        if dtx < dty {
            y += dir(sy, my) * step;
            x = tx_target;
            if y > zero && y < b {
                sx = !sx;
                reflections += 1;
            } else if x == one {
                x = zero;
                cx += 1;
            } else if x == zero && !sx {
                x = one;
                cx -= 1;
            }
        } else {
            x += dir(sx, mx) * step;
            y = ty_target;
            if x > zero && x < a {
                sy = !sy;
                reflections += 1;
            } else if y == one {
                y = zero;
                cy += 1;
            } else if y == zero && !sy {
                y = one;
                cy -= 1;
            }
        }
    }
    let direction = [dir(sx, mx), dir(sy, my)];
    Ok(DisplacementSeries {
        checkpoints: out,
        envelope,
        reflections,
        final_state: BilliardState { cell: (cx, cy), position: [x, y], direction },
        norm_drift: norm_deviation(&direction),
    })
}

/// Perturbation applied to the start point after a corner hit.
pub const RETRY_PERTURBATION: f64 = 1e-9;

/// Retries after a corner hit, each time moving the start by
/// [`RETRY_PERTURBATION`] along the diagonal. Returns the series and the
/// number of retries used.
pub fn simulate_with_retries(
    table: &WindTreeTable,
    start: &BilliardState,
    horizon: f64,
    retries: usize,
) -> Result<(DisplacementSeries, usize)> {
    let mut state = *start;
    let mut last = Error::CornerHit(0.0);
    for attempt in 0..=retries {
        match simulate(table, &state, horizon) {
            Ok(s) => return Ok((s, attempt)),
            Err(e @ Error::CornerHit(_)) => {
                last = e;
                state.position[0] += RETRY_PERTURBATION;
                state.position[1] += RETRY_PERTURBATION;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
