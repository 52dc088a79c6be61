//! Affine automorphisms of an origami and their action on homology.
//!
//! An automorphism is stored as a sequence of elementary steps: unit shears,
//! which carry an origami to its image under the shear, and relabelings,
//! which identify the sheared origami with the original one. Each step comes
//! with an explicit map on dual-graph chains, so the homology action is
//! obtained by pushing the basis cycles through the steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{classify, PlanarMatrix};
use crate::lattice::IntMatrix;
use crate::surface::{compose, invert, Chain, HomologyLattice, Permutation, TranslationSurface};

/// Unit shears `T = [[1,1],[0,1]]` and `L = [[1,0],[1,1]]` and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shear {
    T,
    TInv,
    L,
    LInv,
}

impl Shear {
    pub fn matrix(self) -> PlanarMatrix {
        let (a, b, c, d) = match self {
            Shear::T => (1, 1, 0, 1),
            Shear::TInv => (1, -1, 0, 1),
            Shear::L => (1, 0, 1, 1),
            Shear::LInv => (1, 0, -1, 1),
        };
        PlanarMatrix::from_ints(a, b, c, d).expect("unit shear")
    }

    pub fn inverse(self) -> Self {
        match self {
            Shear::T => Shear::TInv,
            Shear::TInv => Shear::T,
            Shear::L => Shear::LInv,
            Shear::LInv => Shear::L,
        }
    }

    /// Image origami, chain map on dual edges, and the square bookkeeping map.
    fn apply(self, right: &[usize], top: &[usize]) -> (Permutation, Permutation, ShearMap) {
        let (ri, ti) = (invert(right), invert(top));
        match self {
            Shear::T => {
                (right.to_vec(), compose(top, &ri), ShearMap { kind: self, h: right.to_vec(), v: top.to_vec() })
            }
            Shear::TInv => (right.to_vec(), compose(top, right), ShearMap { kind: self, h: ri, v: top.to_vec() }),
            Shear::L => {
                (compose(right, &ti), top.to_vec(), ShearMap { kind: self, h: right.to_vec(), v: top.to_vec() })
            }
            Shear::LInv => (compose(right, top), top.to_vec(), ShearMap { kind: self, h: right.to_vec(), v: ti }),
        }
    }
}

/// The data a shear's chain map needs from the origami it acts on.
struct ShearMap {
    kind: Shear,
    h: Permutation,
    v: Permutation,
}

impl ShearMap {
    fn push(&self, chain: &[i64]) -> Chain {
        let n = self.h.len();
        let mut out = vec![0i64; 2 * n];
        for s in 0..n {
            let (r, u) = (chain[s], chain[n + s]);
            if r == 0 && u == 0 {
                continue;
            }
            match self.kind {
                Shear::T => {
                    out[self.h[s]] += r;
                    out[n + self.h[s]] += u;
                    out[self.v[s]] += u;
                }
                // h holds right⁻¹ here
                Shear::TInv => {
                    out[s] += r;
                    out[n + self.h[s]] += u;
                    out[self.h[s]] -= u;
                }
                Shear::L => {
                    out[self.v[s]] += r;
                    out[n + self.h[s]] += r;
                    out[n + self.v[s]] += u;
                }
                // v holds top⁻¹ here
                Shear::LInv => {
                    out[self.v[s]] += r;
                    out[n + self.v[s]] -= r;
                    out[n + s] += u;
                }
            }
        }
        out
    }

    /// Where the shear sends each square's centre, combinatorially.
    fn square_map(&self) -> Permutation {
        match self.kind {
            Shear::T => self.h.clone(),
            Shear::L => self.v.clone(),
            Shear::TInv | Shear::LInv => (0..self.h.len()).collect(),
        }
    }
}

/// One elementary step of an affine map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Shear(Shear),
    /// Rename square `x` to `π(x)`.
    Relabel(Permutation),
}

impl Step {
    fn inverse(&self) -> Self {
        match self {
            Step::Shear(s) => Step::Shear(s.inverse()),
            Step::Relabel(p) => Step::Relabel(invert(p)),
        }
    }
}

/// An affine self-map of an origami with its derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAutomorphism {
    pub derivative: PlanarMatrix,
    /// Applied first to last.
    pub steps: Vec<Step>,
    /// Composite combinatorial image of each square.
    pub cell_map: Permutation,
}

impl AffineAutomorphism {
    pub fn identity(n_squares: usize) -> Self {
        Self { derivative: PlanarMatrix::identity(), steps: Vec::new(), cell_map: (0..n_squares).collect() }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut steps = other.steps.clone();
        steps.extend(self.steps.iter().cloned());
        Self {
            derivative: self.derivative.multiply(&other.derivative),
            steps,
            cell_map: compose(&self.cell_map, &other.cell_map),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            derivative: self.derivative.inverse(),
            steps: self.steps.iter().rev().map(Step::inverse).collect(),
            cell_map: invert(&self.cell_map),
        }
    }

    /// Runs the steps on `surface`, returning the final gluings and the image
    /// of every given chain.
    fn run(&self, surface: &TranslationSurface, chains: &[Chain]) -> (Permutation, Permutation, Vec<Chain>) {
        let mut right = surface.right().to_vec();
        let mut top = surface.top().to_vec();
        let mut chains = chains.to_vec();
        let n = right.len();
        for step in &self.steps {
            match step {
                Step::Shear(s) => {
                    let (r, t, map) = s.apply(&right, &top);
                    chains = chains.iter().map(|c| map.push(c)).collect();
                    right = r;
                    top = t;
                }
                Step::Relabel(p) => {
                    let pi = invert(p);
                    right = compose(p, &compose(&right, &pi));
                    top = compose(p, &compose(&top, &pi));
                    chains = chains
                        .iter()
                        .map(|c| {
                            let mut out = vec![0i64; 2 * n];
                            for x in 0..n {
                                out[p[x]] += c[x];
                                out[n + p[x]] += c[n + x];
                            }
                            out
                        })
                        .collect();
                }
            }
        }
        (right, top, chains)
    }

    /// Checks that the steps carry the surface back onto itself.
    pub fn is_automorphism_of(&self, surface: &TranslationSurface) -> bool {
        let (r, t, _) = self.run(surface, &[]);
        r == surface.right() && t == surface.top()
    }

    /// Pushes a closed chain through the map.
    pub fn push_chain(&self, surface: &TranslationSurface, chain: &[i64]) -> Chain {
        self.run(surface, &[chain.to_vec()]).2.pop().expect("one chain")
    }
}

/// Matrix of the induced map on `H₁` in the lattice basis: column `k` holds
/// the coordinates of the image of basis cycle `k`.
pub fn homology_action_of(
    auto: &AffineAutomorphism,
    surface: &TranslationSurface,
    lattice: &HomologyLattice,
) -> Result<IntMatrix> {
    let (r, t, images) = auto.run(surface, lattice.basis());
    if r != surface.right() || t != surface.top() {
        return Err(Error::InvalidSurface("steps do not return to the original gluings".into()));
    }
    let cols = images.iter().map(|c| lattice.coordinates(c)).collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_cols(lattice.rank(), &cols))
}

/// Induced action on `H¹` in dual coordinates: the inverse transpose.
pub fn cohomology_action(homology_matrix: &IntMatrix) -> Result<IntMatrix> {
    homology_matrix
        .inverse_unimodular()
        .map(|m| m.transpose())
        .ok_or_else(|| Error::DeterminantNotOne("homology action is not unimodular".into()))
}

/// `Mᵀ J M = J`.
pub fn is_symplectic(m: &IntMatrix, j: &IntMatrix) -> bool {
    m.transpose().checked_mul(j).and_then(|x| x.checked_mul(m)).is_some_and(|x| x == *j)
}

/// Isomorphisms `π` with `π∘right' = right∘π` and `π∘top' = top∘π`, in
/// increasing order of `π(0)`, restricted to those commuting with `symmetries`.
fn isomorphisms(
    right_from: &[usize],
    top_from: &[usize],
    right_to: &[usize],
    top_to: &[usize],
    symmetries: &[Permutation],
) -> Vec<Permutation> {
    let n = right_from.len();
    let mut out = Vec::new();
    let (rfi, tfi) = (invert(right_from), invert(top_from));
    let (rti, tti) = (invert(right_to), invert(top_to));
    'candidates: for t in 0..n {
        let mut pi = vec![usize::MAX; n];
        pi[0] = t;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            let y = pi[x];
            for (a, b) in [(right_from[x], right_to[y]), (top_from[x], top_to[y]), (rfi[x], rti[y]), (tfi[x], tti[y])] {
                if pi[a] == usize::MAX {
                    pi[a] = b;
                    stack.push(a);
                } else if pi[a] != b {
                    continue 'candidates;
                }
            }
        }
        if pi.contains(&usize::MAX) || !crate::surface::is_permutation(&pi) {
            continue;
        }
        if symmetries.iter().all(|s| compose(&pi, s) == compose(s, &pi)) {
            out.push(pi);
        }
    }
    out
}

/// Writes an integer special linear matrix as a product of unit shears,
/// leftmost factor first. `−I` is written as `(T L⁻¹ T)²`.
pub fn shear_decomposition(m: &PlanarMatrix) -> Result<Vec<Shear>> {
    let [[a0, b0], [c0, d0]] = m.to_i64().ok_or_else(|| Error::InvalidParameter("matrix is not integral".into()))?;
    let (mut a, mut b, mut c, mut d) = (a0 as i128, b0 as i128, c0 as i128, d0 as i128);
    if a * d - b * c != 1 {
        return Err(Error::DeterminantNotOne(format!("{}", a * d - b * c)));
    }
    // reduce by row operations X·M, recording the X; then M = X₁⁻¹⋯X_k⁻¹ · rest
    let mut applied: Vec<Shear> = Vec::new();
    let push = |s: Shear, times: i128, applied: &mut Vec<Shear>| {
        for _ in 0..times {
            applied.push(s);
        }
    };
    while c != 0 {
        if a == 0 {
            // row1 += row2
            a += c;
            b += d;
            push(Shear::T, 1, &mut applied);
        } else if a.abs() > c.abs() {
            let q = a.div_euclid(c);
            a -= q * c;
            b -= q * d;
            if q > 0 {
                push(Shear::TInv, q, &mut applied);
            } else {
                push(Shear::T, -q, &mut applied);
            }
        } else {
            let q = c.div_euclid(a);
            c -= q * a;
            d -= q * b;
            if q > 0 {
                push(Shear::LInv, q, &mut applied);
            } else {
                push(Shear::L, -q, &mut applied);
            }
        }
    }
    let mut out: Vec<Shear> = applied.iter().map(|s| s.inverse()).collect();
    // what is left is [[a, b], [0, a]] with a = ±1
    if a == -1 {
        let half = [Shear::T, Shear::LInv, Shear::T];
        out.extend(half.iter().chain(half.iter()).copied());
        b = -b;
    }
    let s = if b > 0 { Shear::T } else { Shear::TInv };
    out.extend(std::iter::repeat_n(s, b.unsigned_abs() as usize));
    Ok(out)
}

/// The stabilizing lift of `m` commuting with the surface symmetries whose
/// relabeling is smallest at square 0, if `m` stabilizes the origami.
pub fn lift(surface: &TranslationSurface, m: &PlanarMatrix) -> Result<Option<AffineAutomorphism>> {
    let shears = shear_decomposition(m)?;
    let mut right = surface.right().to_vec();
    let mut top = surface.top().to_vec();
    let mut cell_map: Permutation = (0..surface.n_squares()).collect();
    // matrix factors act rightmost first
    for s in shears.iter().rev() {
        let (r, t, map) = s.apply(&right, &top);
        cell_map = compose(&map.square_map(), &cell_map);
        right = r;
        top = t;
    }
    let Some(pi) = isomorphisms(&right, &top, surface.right(), surface.top(), surface.symmetries()).into_iter().next()
    else {
        return Ok(None);
    };
    let mut steps: Vec<Step> = shears.iter().rev().map(|&s| Step::Shear(s)).collect();
    cell_map = compose(&pi, &cell_map);
    steps.push(Step::Relabel(pi));
    Ok(Some(AffineAutomorphism { derivative: m.clone(), steps, cell_map }))
}

/// Stabilizing elements found by a bounded search.
#[derive(Clone, Debug)]
pub struct VeechGenerators {
    /// `[[1,n],[0,1]]` lift.
    pub horizontal: AffineAutomorphism,
    /// `[[1,0],[m,1]]` lift.
    pub vertical: AffineAutomorphism,
    pub n: i64,
    pub m: i64,
    /// Further non-elliptic stabilizing elements with entries bounded by the
    /// search bound.
    pub extra: Vec<AffineAutomorphism>,
}

impl VeechGenerators {
    /// The parabolic pair, horizontal first.
    pub fn pair(&self) -> [&AffineAutomorphism; 2] {
        [&self.horizontal, &self.vertical]
    }

    pub fn all(&self) -> Vec<&AffineAutomorphism> {
        let mut v = vec![&self.horizontal, &self.vertical];
        v.extend(self.extra.iter());
        v
    }
}

/// Searches the integer special linear group for stabilizers of `surface`.
///
/// The parabolic powers are searched up to `search_bound`; the extra elements
/// are every non-elliptic, non-central matrix with entries of absolute value
/// at most `search_bound` admitting a lift that commutes with the surface
/// symmetries.
pub fn find_veech_generators(surface: &TranslationSurface, search_bound: i64) -> Result<VeechGenerators> {
    let parabolic = |k: i64, upper: bool| -> Result<Option<AffineAutomorphism>> {
        let m = if upper { PlanarMatrix::from_ints(1, k, 0, 1)? } else { PlanarMatrix::from_ints(1, 0, k, 1)? };
        lift(surface, &m)
    };
    let mut horizontal = None;
    for k in 1..=search_bound {
        if let Some(a) = parabolic(k, true)? {
            horizontal = Some((k, a));
            break;
        }
    }
    let (n, horizontal) = horizontal.ok_or(Error::NotFound("horizontal"))?;
    let mut vertical = None;
    for k in 1..=search_bound {
        if let Some(a) = parabolic(k, false)? {
            vertical = Some((k, a));
            break;
        }
    }
    let (m, vertical) = vertical.ok_or(Error::NotFound("vertical"))?;

    let mut extra = Vec::new();
    let r = search_bound;
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                // d is determined when a ≠ 0; otherwise b·c = −1
                let ds: Vec<i64> = if a != 0 {
                    if (1 + b * c) % a == 0 {
                        vec![(1 + b * c) / a]
                    } else {
                        vec![]
                    }
                } else if b * c == -1 {
                    (-r..=r).collect()
                } else {
                    vec![]
                };
                for d in ds {
                    if d.abs() > r {
                        continue;
                    }
                    let mat = PlanarMatrix::from_ints(a, b, c, d)?;
                    if !classify(&mat).is_infinite_order() || mat == horizontal.derivative || mat == vertical.derivative
                    {
                        continue;
                    }
                    if let Some(auto) = lift(surface, &mat)? {
                        extra.push(auto);
                    }
                }
            }
        }
    }
    Ok(VeechGenerators { horizontal, vertical, n, m, extra })
}
