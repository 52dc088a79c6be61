use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of square labels, stored as its image table.
pub type Permutation = Vec<usize>;

pub fn invert(p: &[usize]) -> Permutation {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// `p ∘ q`: apply `q` first.
pub fn compose(p: &[usize], q: &[usize]) -> Permutation {
    q.iter().map(|&i| p[i]).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let set: BTreeSet<_> = p.iter().copied().collect();
    set.len() == p.len() && p.iter().all(|&x| x < p.len())
}

/// A cone point: the class of square lower-left corners it collects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    /// Squares whose lower-left corner is this point, in counter-clockwise order.
    pub corners: Vec<usize>,
}

impl Vertex {
    /// Cone angle divided by 2π.
    pub fn angle_multiple(&self) -> usize {
        self.corners.len()
    }
}

/// One glued edge pair; holonomy vectors are in unit-square coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeGluing {
    pub square: usize,
    pub partner: usize,
    /// `true` for the right edge of `square` glued to the left edge of `partner`.
    pub vertical: bool,
    pub holonomy: (i64, i64),
    pub partner_holonomy: (i64, i64),
}

/// A square-tiled translation surface (origami).
///
/// Square `s` has `right[s]` to its right and `top[s]` above it. Each square
/// has side `scale` in table units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationSurface {
    right: Permutation,
    top: Permutation,
    scale: Ratio<i64>,
    vertices: Vec<Vertex>,
    /// Translation automorphisms an affine lift must commute with (the deck
    /// group of an unfolding); empty for a bare origami.
    symmetries: Vec<Permutation>,
}

impl TranslationSurface {
    pub fn new(right: Permutation, top: Permutation, scale: Ratio<i64>) -> Result<Self> {
        Self::with_symmetries(right, top, scale, Vec::new())
    }

    pub fn with_symmetries(
        right: Permutation,
        top: Permutation,
        scale: Ratio<i64>,
        symmetries: Vec<Permutation>,
    ) -> Result<Self> {
        let n = right.len();
        if n == 0 {
            return Err(Error::InvalidSurface("no squares".into()));
        }
        if top.len() != n {
            return Err(Error::InvalidSurface(format!("right has {n} entries but top has {}", top.len())));
        }
        if !is_permutation(&right) || !is_permutation(&top) {
            return Err(Error::InvalidSurface("gluings are not permutations".into()));
        }
        if scale <= Ratio::from_integer(0) {
            return Err(Error::InvalidSurface("scale must be positive".into()));
        }
        if !connected(&right, &top) {
            return Err(Error::InvalidSurface("surface is not connected".into()));
        }
        for s in &symmetries {
            if s.len() != n || !is_permutation(s) {
                return Err(Error::InvalidSurface("symmetry is not a permutation".into()));
            }
            if compose(s, &right) != compose(&right, s) || compose(s, &top) != compose(&top, s) {
                return Err(Error::InvalidSurface("symmetry does not commute with the gluings".into()));
            }
        }
        let vertices = corner_classes(&right, &top);
        let surface = Self { right, top, scale, vertices, symmetries };
        surface.check_gauss_bonnet()?;
        Ok(surface)
    }

    /// The square torus.
    pub fn torus() -> Self {
        Self::new(vec![0], vec![0], Ratio::from_integer(1)).expect("torus is valid")
    }

    pub fn n_squares(&self) -> usize {
        self.right.len()
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn scale(&self) -> Ratio<i64> {
        self.scale
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn symmetries(&self) -> &[Permutation] {
        &self.symmetries
    }

    /// Cone points proper: vertices with angle above 2π. Regular vertices are
    /// not kept as marked points.
    pub fn singularities(&self) -> Vec<&Vertex> {
        self.vertices.iter().filter(|v| v.angle_multiple() > 1).collect()
    }

    /// Genus from cone angles: Σ(k − 1) = 2g − 2.
    pub fn genus(&self) -> usize {
        let excess: usize = self.vertices.iter().map(|v| v.angle_multiple() - 1).sum();
        (excess + 2) / 2
    }

    /// Euler characteristic `V − E + F` of the square complex.
    pub fn euler_characteristic(&self) -> i64 {
        let n = self.n_squares() as i64;
        self.vertices.len() as i64 - 2 * n + n
    }

    fn check_gauss_bonnet(&self) -> Result<()> {
        let excess: usize = self.vertices.iter().map(|v| v.angle_multiple() - 1).sum();
        if !excess.is_multiple_of(2) {
            return Err(Error::InvalidSurface("odd total angle excess".into()));
        }
        let g = self.genus() as i64;
        if self.euler_characteristic() != 2 - 2 * g {
            return Err(Error::InvalidSurface("Gauss–Bonnet and Euler characteristic disagree".into()));
        }
        Ok(())
    }

    /// Every edge gluing with the holonomy of both sides.
    pub fn edges(&self) -> Vec<EdgeGluing> {
        let n = self.n_squares();
        let mut out = Vec::with_capacity(2 * n);
        for s in 0..n {
            out.push(EdgeGluing {
                square: s,
                partner: self.right[s],
                vertical: true,
                holonomy: (0, 1),
                partner_holonomy: (0, 1),
            });
            out.push(EdgeGluing {
                square: s,
                partner: self.top[s],
                vertical: false,
                holonomy: (1, 0),
                partner_holonomy: (1, 0),
            });
        }
        out
    }

    pub fn to_file(&self) -> SurfaceFile {
        SurfaceFile {
            version: Some(SURFACE_FILE_VERSION),
            n_squares: self.n_squares(),
            right: self.right.clone(),
            top: self.top.clone(),
            scale: [*self.scale.numer(), *self.scale.denom()],
            symmetries: if self.symmetries.is_empty() { None } else { Some(self.symmetries.clone()) },
        }
    }

    pub fn from_file(file: &SurfaceFile) -> Result<Self> {
        if let Some(v) = file.version {
            if v != SURFACE_FILE_VERSION {
                return Err(Error::InvalidSurface(format!("unsupported file version {v}")));
            }
        }
        if file.right.len() != file.n_squares || file.top.len() != file.n_squares {
            return Err(Error::InvalidSurface(format!(
                "n_squares = {} but permutations have lengths {} and {}",
                file.n_squares,
                file.right.len(),
                file.top.len()
            )));
        }
        if file.scale[1] == 0 {
            return Err(Error::InvalidSurface("scale denominator is zero".into()));
        }
        Self::with_symmetries(
            file.right.clone(),
            file.top.clone(),
            Ratio::new(file.scale[0], file.scale[1]),
            file.symmetries.clone().unwrap_or_default(),
        )
    }
}

pub const SURFACE_FILE_VERSION: u32 = 1;

/// On-disk surface definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub n_squares: usize,
    pub right: Vec<usize>,
    pub top: Vec<usize>,
    pub scale: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetries: Option<Vec<Vec<usize>>>,
}

fn connected(right: &[usize], top: &[usize]) -> bool {
    let n = right.len();
    let (ri, ti) = (invert(right), invert(top));
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(s) = stack.pop() {
        for t in [right[s], top[s], ri[s], ti[s]] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Lower-left corners grouped into vertices. Walking counter-clockwise around
/// the lower-left corner of `s` visits left, lower-left, lower squares and
/// comes back at the square above the lower one, i.e. at `top·right·top⁻¹·right⁻¹ (s)`.
fn corner_classes(right: &[usize], top: &[usize]) -> Vec<Vertex> {
    let (ri, ti) = (invert(right), invert(top));
    let n = right.len();
    let step = |s: usize| top[right[ti[ri[s]]]];
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut corners = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            corners.push(x);
            x = step(x);
        }
        out.push(Vertex { corners });
    }
    out
}
