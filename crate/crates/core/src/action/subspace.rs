use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::GroupWord;
use crate::lattice::{elementary_divisors, in_rational_span, saturate, solve_integer, IntMatrix};
use crate::surface::{CohomologyClass, HomologyLattice};

/// A saturated sublattice of `ℤ^{2g}` (cohomology coordinates), stored as the
/// columns of a matrix in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub basis: IntMatrix,
    pub saturated: bool,
    /// Set when every seed was zero.
    pub degenerate: bool,
}

impl InvariantSubspace {
    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn full(rank: usize) -> Self {
        Self { basis: IntMatrix::identity(rank), saturated: true, degenerate: false }
    }

    /// The saturation of the span of the given columns, in Hermite form.
    pub fn spanned_by(ambient: usize, columns: &[Vec<i128>]) -> Self {
        let nonzero: Vec<Vec<i128>> = columns.iter().filter(|c| c.iter().any(|&x| x != 0)).cloned().collect();
        if nonzero.is_empty() {
            return Self { basis: IntMatrix::zeros(ambient, 0), saturated: true, degenerate: true };
        }
        let basis = saturate(&IntMatrix::from_cols(ambient, &nonzero));
        Self { basis, saturated: true, degenerate: false }
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.rank() > 0 && solve_integer(&self.basis, v).is_some() || v.iter().all(|&x| x == 0)
    }

    /// All elementary divisors of the basis matrix are one.
    pub fn check_saturated(&self) -> bool {
        elementary_divisors(&self.basis).iter().all(|&d| d == 1)
    }

    pub fn columns(&self) -> Vec<Vec<i128>> {
        (0..self.rank()).map(|j| self.basis.col(j)).collect()
    }

    /// Direct sum of sublattices, saturated again.
    pub fn sum(&self, other: &Self) -> Self {
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::spanned_by(self.ambient_rank(), &cols)
    }
}

/// Smallest saturated sublattice containing the seeds and closed under the
/// given (cohomology) matrices.
pub fn smallest_invariant_subspace(seeds: &[CohomologyClass], generators: &[IntMatrix]) -> Result<InvariantSubspace> {
    let ambient =
        seeds.first().map(|s| s.coefficients.len()).ok_or(Error::InvalidParameter("no seed classes".into()))?;
    for s in seeds {
        if s.coefficients.len() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: s.coefficients.len() });
        }
    }
    let mut current =
        InvariantSubspace::spanned_by(ambient, &seeds.iter().map(|s| s.coefficients.clone()).collect::<Vec<_>>());
    if current.degenerate {
        return Ok(current);
    }
    loop {
        let mut cols = current.columns();
        for g in generators {
            for c in current.columns() {
                cols.push(g.mul_vec(&c));
            }
        }
        let next = InvariantSubspace::spanned_by(ambient, &cols);
        if next.rank() == current.rank() {
            return Ok(next);
        }
        current = next;
    }
}

/// A representation of the free group on the generators by integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub generator_images: Vec<IntMatrix>,
    pub inverse_images: Vec<IntMatrix>,
    pub subspace: InvariantSubspace,
}

impl Representation {
    pub fn new(generator_images: Vec<IntMatrix>, subspace: InvariantSubspace) -> Result<Self> {
        let inverse_images = generator_images
            .iter()
            .map(|m| m.inverse_unimodular().ok_or_else(|| Error::DeterminantNotOne(format!("{}", m.det()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { generator_images, inverse_images, subspace })
    }

    pub fn dim(&self) -> usize {
        self.subspace.rank()
    }

    /// Block-diagonal sum: the kernel is the intersection of the kernels.
    pub fn direct_sum(parts: &[&Representation]) -> Result<Self> {
        let dims: Vec<usize> = parts.iter().map(|p| p.dim()).collect();
        let total: usize = dims.iter().sum();
        let gens = parts.first().map_or(0, |p| p.generator_images.len());
        let ambient = parts.first().map_or(0, |p| p.subspace.ambient_rank());
        let mut images = Vec::with_capacity(gens);
        for g in 0..gens {
            let mut m = IntMatrix::zeros(total, total);
            let mut off = 0;
            for (p, &d) in parts.iter().zip(&dims) {
                for i in 0..d {
                    for j in 0..d {
                        m[(off + i, off + j)] = p.generator_images[g][(i, j)];
                    }
                }
                off += d;
            }
            images.push(m);
        }
        let mut sub = InvariantSubspace { basis: IntMatrix::zeros(ambient, 0), saturated: true, degenerate: true };
        for p in parts {
            sub = if sub.degenerate { p.subspace.clone() } else { sub.sum(&p.subspace) };
        }
        Self::new(images, sub)
    }

    /// Image of a word, with exact overflow detection.
    pub fn evaluate(&self, word: &GroupWord) -> Result<IntMatrix> {
        let mut acc = IntMatrix::identity(self.dim());
        for (g, s) in word.steps() {
            let m = if s > 0 { &self.generator_images[g] } else { &self.inverse_images[g] };
            acc = acc.checked_mul(m).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// Whether the word maps to the identity, falling back to arbitrary
    /// precision when machine integers overflow.
    pub fn is_trivial(&self, word: &GroupWord) -> bool {
        match self.evaluate(word) {
            Ok(m) => m.is_identity(),
            Err(_) => self
                .evaluate_big(word)
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })),
        }
    }

    pub fn evaluate_big(&self, word: &GroupWord) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        let big = |m: &IntMatrix| -> Vec<Vec<BigInt>> {
            (0..d).map(|i| (0..d).map(|j| BigInt::from(m[(i, j)])).collect()).collect()
        };
        let mut acc: Vec<Vec<BigInt>> =
            (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        for (g, s) in word.steps() {
            let m = big(if s > 0 { &self.generator_images[g] } else { &self.inverse_images[g] });
            acc = (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| &acc[i][k] * &m[k][j]).sum()).collect()).collect();
        }
        acc
    }
}

/// Expresses each generator on the basis of `f`.
pub fn restrict(generators: &[IntMatrix], f: &InvariantSubspace) -> Result<Representation> {
    let mut images = Vec::with_capacity(generators.len());
    for (k, g) in generators.iter().enumerate() {
        let mut cols = Vec::with_capacity(f.rank());
        for c in f.columns() {
            cols.push(solve_integer(&f.basis, &g.mul_vec(&c)).ok_or(Error::NotInvariant(k))?);
        }
        images.push(IntMatrix::from_cols(f.rank(), &cols));
    }
    Representation::new(images, f.clone())
}

/// Every basis class of `f` has zero holonomy.
pub fn check_zero_drift(f: &InvariantSubspace, lattice: &HomologyLattice) -> Result<bool> {
    for c in f.columns() {
        let (x, y) = lattice.holonomy(&CohomologyClass::new(c))?;
        if !x.is_zero() || !y.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Neither period class lies in the rational span of `f`.
pub fn check_tautological_exclusion(f: &InvariantSubspace, lattice: &HomologyLattice) -> bool {
    let re = lattice.real_period_class().coefficients;
    let im = lattice.imaginary_period_class().coefficients;
    if f.rank() == 0 {
        return true;
    }
    !in_rational_span(&f.basis, &re) && !in_rational_span(&f.basis, &im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn invariant_span_grows_to_orbit() {
        // cyclic shift on ℤ³: the orbit of e₁ is everything, of (1,1,1) a line
        let shift = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let e1 = CohomologyClass::new(vec![1, 0, 0]);
        assert_eq!(smallest_invariant_subspace(&[e1], std::slice::from_ref(&shift)).unwrap().rank(), 3);
        let ones = CohomologyClass::new(vec![2, 2, 2]);
        let f = smallest_invariant_subspace(&[ones], std::slice::from_ref(&shift)).unwrap();
        assert_eq!(f.rank(), 1);
        assert!(f.check_saturated());
        let rep = restrict(&[shift], &f).unwrap();
        assert!(rep.generator_images[0].is_identity());
    }

    #[test]
    fn zero_seed_is_degenerate() {
        let f = smallest_invariant_subspace(&[CohomologyClass::zero(4)], &[IntMatrix::identity(4)]).unwrap();
        assert!(f.degenerate);
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn non_invariant_restriction_fails() {
        let shift = m(&[&[0, 1], &[1, 0]]);
        let f = InvariantSubspace::spanned_by(2, &[vec![1, 0]]);
        assert_eq!(restrict(&[shift], &f).unwrap_err(), Error::NotInvariant(0));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let g = m(&[&[2, 1], &[1, 1]]);
        let rep = Representation::new(vec![g], InvariantSubspace::full(2)).unwrap();
        let w = GroupWord::from_steps(&vec![(0, 1); 120]);
        assert_eq!(rep.evaluate(&w), Err(Error::Overflow));
        assert!(!rep.is_trivial(&w));
        let back = w.concat(&w.inverse());
        assert!(rep.is_trivial(&back));
    }
}
