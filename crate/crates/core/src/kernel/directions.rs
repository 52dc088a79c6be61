use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::{evaluate_planar, KernelWord};
use crate::group::{
    classify, direction_distance, fixed_directions, ElementTag, GroupWord, PlanarMatrix, ANGLE_TOLERANCE,
};

/// Sorted boundary directions in `[0, π)` with their largest circular gap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    pub directions: Vec<f64>,
    pub max_gap: f64,
    /// No directions at all; `max_gap` is then `π` by convention.
    pub vacuous: bool,
}

impl DirectionSet {
    /// The gap is measured on all the given angles, before near-duplicates
    /// are merged, so adding angles never increases it.
    pub fn from_angles(mut angles: Vec<f64>) -> Self {
        angles.retain(|a| a.is_finite());
        if angles.is_empty() {
            return Self { directions: Vec::new(), max_gap: PI, vacuous: true };
        }
        angles.sort_by(f64::total_cmp);
        let mut max_gap = PI - angles[angles.len() - 1] + angles[0];
        for w in angles.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        let mut directions: Vec<f64> = Vec::with_capacity(angles.len());
        for a in angles {
            if directions.last().is_none_or(|&l| a - l >= ANGLE_TOLERANCE) {
                directions.push(a);
            }
        }
        if directions.len() > 1 && PI - directions[directions.len() - 1] + directions[0] < ANGLE_TOLERANCE {
            directions.pop();
        }
        Self { directions, max_gap, vacuous: false }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

fn hyperbolic_directions(m: &PlanarMatrix, out: &mut Vec<f64>) {
    if classify(m).tag == ElementTag::Hyperbolic {
        if let Ok((e, c)) = fixed_directions(m) {
            out.push(e);
            out.push(c);
        }
    }
}

/// Hyperbolic kernel words with pairwise distinct expanding directions,
/// shortest word first for each direction.
pub fn eigen_directions(words: &[KernelWord]) -> Vec<(f64, KernelWord)> {
    let mut out: Vec<(f64, KernelWord)> = Vec::new();
    for w in words {
        let m = w.planar();
        if classify(&m).tag != ElementTag::Hyperbolic {
            continue;
        }
        let Ok((e, _)) = fixed_directions(&m) else { continue };
        if out.iter().all(|(d, _)| direction_distance(*d, e) >= ANGLE_TOLERANCE) {
            out.push((e, w.clone()));
        }
    }
    out
}

/// Fixed directions of the hyperbolic elements among the input words, their
/// pairwise products and their conjugates by every word of length at most
/// `budget` in the generators. Sets grow with the budget.
pub fn limit_set_sample(words: &[GroupWord], planar: &[PlanarMatrix], budget: usize) -> DirectionSet {
    let elements: Vec<PlanarMatrix> = words.iter().map(|w| evaluate_planar(w, planar)).collect();
    let mut angles = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if i != j {
                hyperbolic_directions(&a.multiply(b), &mut angles);
            }
        }
    }
    let conjugators = GroupWord::ball(planar.len(), budget);
    let conjugated: Vec<f64> = conjugators
        .par_iter()
        .flat_map_iter(|g| {
            let mg = evaluate_planar(g, planar);
            let mgi = mg.inverse();
            let mut out = Vec::new();
            for e in &elements {
                hyperbolic_directions(&mg.multiply(e).multiply(&mgi), &mut out);
            }
            out
        })
        .collect();
    angles.extend(conjugated);
    DirectionSet::from_angles(angles)
}
