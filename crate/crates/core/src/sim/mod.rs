//! The `ℤ²` cover of the wind-tree surface, billiard runs and diffusion slopes.

mod billiard;
mod cover;
mod diffusion;

pub use billiard::{
    checkpoint_schedule, simulate, simulate_until, simulate_with_retries, BilliardState, DisplacementSeries,
    WindTreeTable, CHECKPOINTS_PER_OCTAVE, CORNER_TOLERANCE, FIRST_CHECKPOINT, RETRY_PERTURBATION, UNIT_TOLERANCE,
};
pub use cover::{cover_flow_displacement, deck_translation, rank2_check, CoverSpec, RankCheck};
pub use diffusion::{
    control_runs, default_window, estimate_slope, generic_directions, generic_scan, kernel_direction_diffusion, median,
    percentile, random_start, run_direction, ControlRuns, DiffusionEstimate, DirectionRun, DEFAULT_RETRIES,
    DISPLACEMENT_FLOOR, MIN_CHECKPOINTS,
};
