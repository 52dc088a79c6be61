//! The compact translation surface underlying a wind-tree table.
//!
//! The table is the unit torus with the obstacle `[0,a]×[0,b]` removed. With
//! rational `a`, `b` the free region is tiled by an `N×N` grid of cells. The
//! surface is four copies of that region, one per reflection `σ = (±1, ±1)`,
//! where copy `σ` carries billiard direction `σ·v` for the surface direction
//! `v`. Hitting a vertical wall switches copy by flipping the horizontal sign;
//! horizontal walls flip the vertical sign.

use num_integer::Integer;
use num_rational::Ratio;

use super::homology::{Chain, CohomologyClass, HomologyLattice};
use super::origami::{Permutation, TranslationSurface};
use crate::error::{Error, Result};

/// Reflection signs of the four sheets, in label order.
pub const SHEETS: [(i64, i64); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

#[derive(Clone, Debug)]
pub struct WindTreeSurface {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
    /// Grid resolution: cells have side `1/N`.
    pub grid: usize,
    surface: TranslationSurface,
    /// `(sheet, i, j)` for each square label.
    labels: Vec<(usize, usize, usize)>,
    /// Table-cell crossings of each square's right edge (±1 or 0).
    horizontal_crossings: Vec<i64>,
    /// Table-cell crossings of each square's top edge.
    vertical_crossings: Vec<i64>,
}

fn in_unit_interval(x: Ratio<i64>) -> bool {
    x > Ratio::from_integer(0) && x < Ratio::from_integer(1)
}

/// Builds the unfolded surface of the wind-tree table with obstacle sides `a`, `b`.
pub fn build_windtree_surface(a: Ratio<i64>, b: Ratio<i64>) -> Result<WindTreeSurface> {
    if !in_unit_interval(a) {
        return Err(Error::InvalidParameter(format!("a = {a} is outside (0, 1)")));
    }
    if !in_unit_interval(b) {
        return Err(Error::InvalidParameter(format!("b = {b} is outside (0, 1)")));
    }
    let grid = a.denom().lcm(b.denom());
    let n = grid as usize;
    let wa = (a * grid).to_integer() as usize;
    let wb = (b * grid).to_integer() as usize;
    let blocked = |i: usize, j: usize| i < wa && j < wb;
    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !blocked(i, j)).collect();
    let cells = free.len();
    let cell_index = |i: usize, j: usize| free.iter().position(|&c| c == (i, j));

    let mut labels = Vec::with_capacity(4 * cells);
    for sheet in 0..4 {
        for &(i, j) in &free {
            labels.push((sheet, i, j));
        }
    }
    let label = |sheet: usize, i: usize, j: usize| sheet * cells + cell_index(i, j).expect("free cell");
    let flip_x = |sheet: usize| sheet ^ 1;
    let flip_y = |sheet: usize| sheet ^ 2;

    let total = labels.len();
    let mut right = vec![0; total];
    let mut top = vec![0; total];
    let mut hx = vec![0i64; total];
    let mut vy = vec![0i64; total];
    for (s, &(sheet, i, j)) in labels.iter().enumerate() {
        let (ex, ey) = SHEETS[sheet];
        let ti = i as i64 + ex;
        let wrapped_i = ti.rem_euclid(n as i64) as usize;
        if blocked(wrapped_i, j) {
            right[s] = label(flip_x(sheet), i, j);
        } else {
            right[s] = label(sheet, wrapped_i, j);
            if ti < 0 || ti >= n as i64 {
                hx[s] = ex;
            }
        }
        let tj = j as i64 + ey;
        let wrapped_j = tj.rem_euclid(n as i64) as usize;
        if blocked(i, wrapped_j) {
            top[s] = label(flip_y(sheet), i, j);
        } else {
            top[s] = label(sheet, i, wrapped_j);
            if tj < 0 || tj >= n as i64 {
                vy[s] = ey;
            }
        }
    }

    // unfolding symmetries: flip a sheet sign and reflect the grid across the
    // obstacle's axis; the composite of two reflections is a translation
    let reflect_x = |i: usize| ((wa as i64 - 1 - i as i64).rem_euclid(n as i64)) as usize;
    let reflect_y = |j: usize| ((wb as i64 - 1 - j as i64).rem_euclid(n as i64)) as usize;
    let tau_x: Permutation = labels.iter().map(|&(sh, i, j)| label(flip_x(sh), reflect_x(i), j)).collect();
    let tau_y: Permutation = labels.iter().map(|&(sh, i, j)| label(flip_y(sh), i, reflect_y(j))).collect();
    let tau_xy: Permutation = tau_x.iter().map(|&s| tau_y[s]).collect();

    let surface = TranslationSurface::with_symmetries(right, top, Ratio::new(1, grid), vec![tau_x, tau_y, tau_xy])?;
    Ok(WindTreeSurface { a, b, grid: n, surface, labels, horizontal_crossings: hx, vertical_crossings: vy })
}

impl WindTreeSurface {
    pub fn surface(&self) -> &TranslationSurface {
        &self.surface
    }

    pub fn labels(&self) -> &[(usize, usize, usize)] {
        &self.labels
    }

    pub fn square_of(&self, sheet: usize, i: usize, j: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == (sheet, i, j))
    }

    /// Cochain counting signed crossings of the vertical cell boundary.
    pub fn horizontal_cochain(&self) -> Chain {
        let mut w = self.horizontal_crossings.clone();
        w.extend(std::iter::repeat_n(0, self.labels.len()));
        w
    }

    /// Cochain counting signed crossings of the horizontal cell boundary.
    pub fn vertical_cochain(&self) -> Chain {
        let mut w = vec![0; self.labels.len()];
        w.extend(self.vertical_crossings.iter().copied());
        w
    }

    /// The cover classes `(f₁, f₂)`: horizontal and vertical crossing counts.
    pub fn cover_classes(&self, lattice: &HomologyLattice) -> Result<(CohomologyClass, CohomologyClass)> {
        Ok((lattice.class_of_cochain(&self.horizontal_cochain())?, lattice.class_of_cochain(&self.vertical_cochain())?))
    }

    /// Core curve of the horizontal corridor strip (the top row of sheet 0).
    pub fn horizontal_strip(&self) -> Chain {
        let start = self.square_of(0, 0, self.grid - 1).expect("corridor cell is free");
        let mut ch = vec![0i64; 2 * self.labels.len()];
        let mut s = start;
        loop {
            ch[s] += 1;
            s = self.surface.right()[s];
            if s == start {
                return ch;
            }
        }
    }

    /// Core curve of the vertical corridor strip (the right column of sheet 0).
    pub fn vertical_strip(&self) -> Chain {
        let n = self.labels.len();
        let start = self.square_of(0, self.grid - 1, 0).expect("corridor cell is free");
        let mut ch = vec![0i64; 2 * n];
        let mut s = start;
        loop {
            ch[n + s] += 1;
            s = self.surface.top()[s];
            if s == start {
                return ch;
            }
        }
    }

    /// A dual-edge path from `from` to `to` crossing no table-cell boundary:
    /// it only moves within one table cell, switching sheets at walls.
    pub fn zero_weight_path(&self, from: usize, to: usize) -> Chain {
        let n = self.labels.len();
        let (right, top) = (self.surface.right(), self.surface.top());
        // breadth-first search over edges of weight zero, either orientation
        let mut prev: Vec<Option<(usize, i64, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for e in 0..2 * n {
                let (a, b, w) = if e < n {
                    (e, right[e], self.horizontal_crossings[e])
                } else {
                    (e - n, top[e - n], self.vertical_crossings[e - n])
                };
                if w != 0 {
                    continue;
                }
                for (p, q, sign) in [(a, b, 1), (b, a, -1)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        prev[q] = Some((e, sign, x));
                        queue.push_back(q);
                    }
                }
            }
        }
        let mut ch = vec![0i64; 2 * n];
        let mut y = to;
        while y != from {
            let (e, sign, x) = prev[y].expect("the sheets of one table cell are connected");
            ch[e] += sign;
            y = x;
        }
        ch
    }

    /// Square and square-local coordinates of a table point (in `[0,1)²`)
    /// moving with billiard direction signs `(sx, sy)`.
    pub fn locate(&self, x: f64, y: f64, sx: i64, sy: i64) -> Option<(usize, f64, f64)> {
        let n = self.grid as f64;
        let (gx, gy) = (x * n, y * n);
        let (i, j) = (gx.floor() as usize, gy.floor() as usize);
        let (fx, fy) = (gx - gx.floor(), gy - gy.floor());
        let sheet = SHEETS.iter().position(|&s| s == (sx, sy))?;
        let s = self.square_of(sheet, i.min(self.grid - 1), j.min(self.grid - 1))?;
        let u = if sx > 0 { fx } else { 1.0 - fx };
        let w = if sy > 0 { fy } else { 1.0 - fy };
        Some((s, u, w))
    }

    /// Straight-line flow on the surface in direction `(cx, cy)` (both
    /// positive) for the given length, recording the dual edges crossed.
    pub fn trace(&self, square: usize, u: f64, w: f64, cx: f64, cy: f64, length: f64) -> (Chain, usize) {
        let n = self.labels.len();
        let mut ch = vec![0i64; 2 * n];
        let (mut s, mut u, mut w) = (square, u, w);
        // lengths are measured in table units; squares have side 1/N
        let mut left = length * self.grid as f64;
        loop {
            let tx = (1.0 - u) / cx;
            let ty = (1.0 - w) / cy;
            let t = tx.min(ty);
            if t > left {
                return (ch, s);
            }
            left -= t;
            if tx < ty {
                ch[s] += 1;
                s = self.surface.right()[s];
                u = 0.0;
                w += cy * t;
            } else {
                ch[n + s] += 1;
                s = self.surface.top()[s];
                w = 0.0;
                u += cx * t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::homology::homology;

    fn half() -> Ratio<i64> {
        Ratio::new(1, 2)
    }

    #[test]
    fn half_half_surface() {
        let wt = build_windtree_surface(half(), half()).unwrap();
        let s = wt.surface();
        assert_eq!(s.n_squares(), 12);
        assert_eq!(s.genus(), 5);
        assert_eq!(s.singularities().len(), 4);
        assert!(s.singularities().iter().all(|v| v.angle_multiple() == 3));
        // Euler characteristic V − E + F cross-check
        assert_eq!(s.euler_characteristic(), 2 - 2 * 5);
    }

    #[test]
    fn gluings_preserve_holonomy() {
        let wt = build_windtree_surface(half(), half()).unwrap();
        for e in wt.surface().edges() {
            assert_eq!(e.holonomy, e.partner_holonomy);
        }
    }

    #[test]
    fn degenerate_parameters() {
        assert!(matches!(build_windtree_surface(Ratio::from_integer(0), half()), Err(Error::InvalidParameter(_))));
        assert!(build_windtree_surface(half(), Ratio::from_integer(1)).is_err());
    }

    #[test]
    fn other_rational_parameters() {
        let wt = build_windtree_surface(Ratio::new(1, 3), Ratio::new(2, 3)).unwrap();
        assert_eq!(wt.grid, 3);
        assert_eq!(wt.surface().genus(), 5);
        assert_eq!(wt.surface().symmetries().len(), 3);
    }

    #[test]
    fn strips_are_closed_and_cross_once() {
        let wt = build_windtree_surface(half(), half()).unwrap();
        let h = homology(wt.surface());
        let (f1, f2) = wt.cover_classes(&h).unwrap();
        let gh = wt.horizontal_strip();
        let gv = wt.vertical_strip();
        assert_eq!(h.evaluate(&f1, &gh).unwrap().abs(), 1);
        assert_eq!(h.evaluate(&f2, &gh).unwrap(), 0);
        assert_eq!(h.evaluate(&f2, &gv).unwrap().abs(), 1);
        assert_eq!(h.evaluate(&f1, &gv).unwrap(), 0);
    }
}
