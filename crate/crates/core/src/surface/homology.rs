//! Integer homology of an origami.
//!
//! Chains live on the dual graph: one node per square, edge `r_s` (index `s`)
//! from the centre of `s` to the centre of `right(s)` and edge `u_s` (index
//! `n + s`) from `s` to `top(s)`. The 2-cells of the dual complex are the
//! loops around the vertices of the square complex, so its first homology is
//! `H₁(X, ℤ)`.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::origami::{invert, TranslationSurface};
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMatrix};

/// Integer coefficients on the `2n` dual edges.
pub type Chain = Vec<i64>;

/// An integer cohomology class, given by its values on the homology basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyClass {
    pub coefficients: Vec<i128>,
}

impl CohomologyClass {
    pub fn new(coefficients: Vec<i128>) -> Self {
        Self { coefficients }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coefficients: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&x| x == 0)
    }

    /// Primitive: the gcd of the coefficients is one.
    pub fn is_primitive(&self) -> bool {
        crate::lattice::content(&self.coefficients) == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() }
    }

    /// Value on a homology class given in basis coordinates.
    pub fn pair(&self, coords: &[i128]) -> Result<i128> {
        if coords.len() != self.coefficients.len() {
            return Err(Error::DimensionMismatch { expected: self.coefficients.len(), got: coords.len() });
        }
        Ok(self.coefficients.iter().zip(coords).map(|(a, b)| a * b).sum())
    }
}

/// Rational planar vector in table units.
pub type Holonomy = (Ratio<i64>, Ratio<i64>);

#[derive(Clone, Debug)]
pub struct HomologyLattice {
    right: Vec<usize>,
    top: Vec<usize>,
    scale: Ratio<i64>,
    nontree: Vec<usize>,
    /// For each square: the tree edge leading towards the root and whether the
    /// square is that edge's head.
    parent: Vec<Option<(usize, bool)>>,
    projector: IntMatrix,
    basis: Vec<Chain>,
    intersection: IntMatrix,
    dual_inverse: IntMatrix,
    periods: Vec<(i64, i64)>,
    vertex_loops: Vec<Chain>,
}

impl HomologyLattice {
    pub fn n_squares(&self) -> usize {
        self.right.len()
    }

    /// `2g`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Chain] {
        &self.basis
    }

    pub fn intersection_matrix(&self) -> &IntMatrix {
        &self.intersection
    }

    /// Boundaries of the dual 2-cells.
    pub fn vertex_loops(&self) -> &[Chain] {
        &self.vertex_loops
    }

    /// Unit-square holonomy of each basis cycle.
    pub fn periods(&self) -> &[(i64, i64)] {
        &self.periods
    }

    fn edge_ends(&self, e: usize) -> (usize, usize) {
        let n = self.n_squares();
        if e < n {
            (e, self.right[e])
        } else {
            (e - n, self.top[e - n])
        }
    }

    /// Boundary of a chain as coefficients on squares.
    pub fn boundary(&self, chain: &[i64]) -> Vec<i64> {
        let mut b = vec![0; self.n_squares()];
        for (e, &c) in chain.iter().enumerate() {
            if c != 0 {
                let (from, to) = self.edge_ends(e);
                b[to] += c;
                b[from] -= c;
            }
        }
        b
    }

    pub fn is_closed(&self, chain: &[i64]) -> bool {
        chain.len() == 2 * self.n_squares() && self.boundary(chain).iter().all(|&x| x == 0)
    }

    /// Coordinates of a closed chain in the homology basis.
    pub fn coordinates(&self, chain: &[i64]) -> Result<Vec<i128>> {
        if chain.len() != 2 * self.n_squares() {
            return Err(Error::DimensionMismatch { expected: 2 * self.n_squares(), got: chain.len() });
        }
        if !self.is_closed(chain) {
            return Err(Error::NotClosed);
        }
        let x: Vec<i128> = self.nontree.iter().map(|&e| chain[e] as i128).collect();
        Ok(self.projector.mul_vec(&x))
    }

    /// `coordinates` as an `r × 2n` matrix. Only meaningful on closed chains.
    pub fn coordinate_matrix(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rank(), 2 * self.n_squares());
        for (k, &e) in self.nontree.iter().enumerate() {
            for i in 0..self.rank() {
                out[(i, e)] = self.projector[(i, k)];
            }
        }
        out
    }

    /// A closed chain representing the given coordinates.
    pub fn chain_of(&self, coords: &[i128]) -> Chain {
        let mut out = vec![0i64; 2 * self.n_squares()];
        for (k, &c) in coords.iter().enumerate() {
            for (o, &b) in out.iter_mut().zip(&self.basis[k]) {
                *o += (c as i64) * b;
            }
        }
        out
    }

    /// Signed crossing count of two closed chains: the second chain is pushed
    /// onto the square edges through the lower-left corners and crossed with
    /// the first.
    pub fn intersect_chains(&self, c: &[i64], d: &[i64]) -> i64 {
        let n = self.n_squares();
        (0..n).map(|s| c[s] * d[n + self.right[s]] - c[n + s] * d[self.top[s]]).sum()
    }

    /// `xᵀ J y` on basis coordinates.
    pub fn intersect(&self, x: &[i128], y: &[i128]) -> Result<i128> {
        let r = self.rank();
        for v in [x, y] {
            if v.len() != r {
                return Err(Error::DimensionMismatch { expected: r, got: v.len() });
            }
        }
        let jy = self.intersection.mul_vec(y);
        Ok(x.iter().zip(&jy).map(|(a, b)| a * b).sum())
    }

    /// Pairing of two cohomology classes through their Poincaré duals.
    pub fn intersect_classes(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<i128> {
        self.intersect(&self.poincare_dual(a)?, &self.poincare_dual(b)?)
    }

    /// Cohomology class of an integer cochain on dual edges.
    pub fn class_of_cochain(&self, weights: &[i64]) -> Result<CohomologyClass> {
        if weights.len() != 2 * self.n_squares() {
            return Err(Error::DimensionMismatch { expected: 2 * self.n_squares(), got: weights.len() });
        }
        let eval = |c: &Chain| -> i128 { c.iter().zip(weights).map(|(a, b)| (*a as i128) * (*b as i128)).sum() };
        if self.vertex_loops.iter().any(|l| eval(l) != 0) {
            return Err(Error::NotCocycle);
        }
        Ok(CohomologyClass::new(self.basis.iter().map(eval).collect()))
    }

    /// An edge cochain representing the class: supported on the non-tree
    /// edges, where it is the transpose of the coordinate projection.
    pub fn cochain_of(&self, class: &CohomologyClass) -> Result<Chain> {
        if class.coefficients.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: class.coefficients.len() });
        }
        let w = self.projector.transpose().mul_vec(&class.coefficients);
        let mut out = vec![0i64; 2 * self.n_squares()];
        for (&e, x) in self.nontree.iter().zip(w) {
            out[e] = i64::try_from(x).map_err(|_| Error::Overflow)?;
        }
        Ok(out)
    }

    /// Value of a class on a closed chain.
    pub fn evaluate(&self, class: &CohomologyClass, chain: &[i64]) -> Result<i128> {
        class.pair(&self.coordinates(chain)?)
    }

    /// The homology class `d` with `⟨d, x⟩ = c(x)` for every `x`.
    pub fn poincare_dual(&self, class: &CohomologyClass) -> Result<Vec<i128>> {
        if class.coefficients.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: class.coefficients.len() });
        }
        Ok(self.dual_inverse.mul_vec(&class.coefficients))
    }

    /// Holonomy (table units) of a homology class in basis coordinates.
    pub fn cycle_holonomy(&self, coords: &[i128]) -> Holonomy {
        let (mut x, mut y) = (0i128, 0i128);
        for (c, p) in coords.iter().zip(&self.periods) {
            x += c * p.0 as i128;
            y += c * p.1 as i128;
        }
        (Ratio::from_integer(x as i64) * self.scale, Ratio::from_integer(y as i64) * self.scale)
    }

    /// Holonomy of the Poincaré dual cycle.
    pub fn holonomy(&self, class: &CohomologyClass) -> Result<Holonomy> {
        Ok(self.cycle_holonomy(&self.poincare_dual(class)?))
    }

    /// Class of `Re ω` (horizontal periods, unit-square units).
    pub fn real_period_class(&self) -> CohomologyClass {
        CohomologyClass::new(self.periods.iter().map(|p| p.0 as i128).collect())
    }

    /// Class of `Im ω`.
    pub fn imaginary_period_class(&self) -> CohomologyClass {
        CohomologyClass::new(self.periods.iter().map(|p| p.1 as i128).collect())
    }

    /// Fundamental cycle of a non-tree edge: the edge closed up through the tree.
    fn fundamental_cycle(&self, e: usize) -> Chain {
        let mut ch = vec![0i64; 2 * self.n_squares()];
        ch[e] += 1;
        let (a, b) = self.edge_ends(e);
        self.walk_to_root(b, 1, &mut ch);
        self.walk_to_root(a, -1, &mut ch);
        ch
    }

    fn walk_to_root(&self, mut x: usize, sign: i64, ch: &mut Chain) {
        while let Some((edge, is_head)) = self.parent[x] {
            let (from, to) = self.edge_ends(edge);
            if is_head {
                ch[edge] -= sign;
                x = from;
            } else {
                ch[edge] += sign;
                x = to;
            }
        }
    }
}

/// Loop around the vertex collecting the given lower-left corners.
fn vertex_loop(right: &[usize], top: &[usize], corners: &[usize]) -> Chain {
    let n = right.len();
    let (ri, ti) = (invert(right), invert(top));
    let mut ch = vec![0i64; 2 * n];
    for &s in corners {
        let left = ri[s];
        let below_left = ti[left];
        let below = right[below_left];
        ch[n + below] += 1;
        ch[left] -= 1;
        ch[n + below_left] -= 1;
        ch[below_left] += 1;
    }
    ch
}

/// Builds the homology lattice: spanning-tree cycles of the dual graph modulo
/// the vertex loops, with a basis read off a Smith normal form.
pub fn homology(surface: &TranslationSurface) -> HomologyLattice {
    let right = surface.right().to_vec();
    let top = surface.top().to_vec();
    let n = right.len();
    let ends = |e: usize| if e < n { (e, right[e]) } else { (e - n, top[e - n]) };

    // breadth-first spanning tree from square 0, edges scanned in index order
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut in_tree = vec![false; 2 * n];
    reached[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for e in 0..2 * n {
            let (a, b) = ends(e);
            let next = if a == x && !reached[b] {
                Some((b, true))
            } else if b == x && !reached[a] {
                Some((a, false))
            } else {
                None
            };
            if let Some((y, is_head)) = next {
                reached[y] = true;
                in_tree[e] = true;
                parent[y] = Some((e, is_head));
                queue.push_back(y);
            }
        }
    }
    let nontree: Vec<usize> = (0..2 * n).filter(|&e| !in_tree[e]).collect();

    let vertex_loops: Vec<Chain> = surface.vertices().iter().map(|v| vertex_loop(&right, &top, &v.corners)).collect();
    let loops_matrix = IntMatrix::from_cols(
        nontree.len(),
        &vertex_loops.iter().map(|l| nontree.iter().map(|&e| l[e] as i128).collect()).collect::<Vec<_>>(),
    );
    let snf = smith_normal_form(&loops_matrix);
    assert!(snf.diagonal.iter().take(snf.rank).all(|&d| d == 1), "homology of a closed surface is torsion-free");
    let rk = snf.rank;
    let m = nontree.len();
    let projector = snf.left.select_rows(rk..m);
    let pinv = snf.left.inverse_unimodular().expect("unimodular transform");

    let mut lattice = HomologyLattice {
        right,
        top,
        scale: surface.scale(),
        nontree,
        parent,
        projector,
        basis: Vec::new(),
        intersection: IntMatrix::zeros(0, 0),
        dual_inverse: IntMatrix::zeros(0, 0),
        periods: Vec::new(),
        vertex_loops,
    };
    let fundamental: Vec<Chain> = lattice.nontree.iter().map(|&e| lattice.fundamental_cycle(e)).collect();
    let basis: Vec<Chain> = (rk..m)
        .map(|col| {
            let mut ch = vec![0i64; 2 * n];
            for (k, fc) in fundamental.iter().enumerate() {
                let c = pinv[(k, col)] as i64;
                if c != 0 {
                    for (o, &f) in ch.iter_mut().zip(fc) {
                        *o += c * f;
                    }
                }
            }
            ch
        })
        .collect();
    let r = basis.len();
    let mut j = IntMatrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            j[(a, b)] = lattice.intersect_chains(&basis[a], &basis[b]) as i128;
        }
    }
    lattice.periods = basis.iter().map(|c| (c[..n].iter().sum::<i64>(), c[n..].iter().sum::<i64>())).collect();
    lattice.dual_inverse = j.transpose().inverse_unimodular().expect("intersection form is unimodular");
    lattice.intersection = j;
    lattice.basis = basis;
    lattice
}
