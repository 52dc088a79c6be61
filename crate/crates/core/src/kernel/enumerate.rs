use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::Representation;
use crate::group::{GroupWord, PlanarMatrix};
use crate::lattice::IntMatrix;

/// A word together with its planar matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWord {
    pub word: GroupWord,
    /// Integer entries of the planar matrix, row-major.
    pub matrix: [[i64; 2]; 2],
}

impl KernelWord {
    pub fn planar(&self) -> PlanarMatrix {
        let [[a, b], [c, d]] = self.matrix;
        PlanarMatrix::from_ints(a, b, c, d).expect("stored matrices have determinant one")
    }

    pub fn from_word(word: GroupWord, planar: &[PlanarMatrix]) -> Option<Self> {
        let m = evaluate_planar(&word, planar);
        Some(Self { word, matrix: m.to_i64()? })
    }
}

/// Planar image of a word in the given generator matrices.
pub fn evaluate_planar(word: &GroupWord, planar: &[PlanarMatrix]) -> PlanarMatrix {
    let inverses: Vec<PlanarMatrix> = planar.iter().map(PlanarMatrix::inverse).collect();
    word.evaluate(PlanarMatrix::identity(), planar, &inverses, |a, b| a.multiply(b))
}

/// Words found in the kernel of one restricted representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSample {
    pub subspace_index: usize,
    pub words: Vec<KernelWord>,
    pub max_word_length: usize,
}

type Mat2 = [[i128; 2]; 2];

fn mul2(a: &Mat2, b: &Mat2) -> Option<Mat2> {
    let e = |i: usize, j: usize| a[i][0].checked_mul(b[0][j])?.checked_add(a[i][1].checked_mul(b[1][j])?);
    Some([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

fn is_central(m: &Mat2) -> bool {
    m[0][1] == 0 && m[1][0] == 0 && m[0][0] == m[1][1] && m[0][0].abs() == 1
}

struct Search<'a> {
    rep: &'a Representation,
    images: Vec<[IntMatrix; 2]>,
    planar: Vec<[Mat2; 2]>,
    max_len: usize,
}

impl Search<'_> {
    /// Depth-first search below a prefix whose images are already known.
    fn below(&self, steps: &mut Vec<(usize, i64)>, rho: &IntMatrix, planar: &Mat2, out: &mut Vec<(GroupWord, Mat2)>) {
        if !steps.is_empty() && !is_central(planar) {
            let trivial = if rho.rows() == 0 { true } else { rho.is_identity() };
            if trivial {
                out.push((GroupWord::from_steps(steps), *planar));
            }
        }
        if steps.len() == self.max_len {
            return;
        }
        for g in 0..self.images.len() {
            for (k, s) in [(0usize, 1i64), (1, -1)] {
                if let Some(&(pg, ps)) = steps.last() {
                    if pg == g && ps == -s {
                        continue;
                    }
                }
                let next_rho = match rho.checked_mul(&self.images[g][k]) {
                    Some(m) => m,
                    None => {
                        // past machine range: finish this subtree word by word
                        steps.push((g, s));
                        self.below_exact(steps, out);
                        steps.pop();
                        continue;
                    }
                };
                let Some(next_planar) = mul2(planar, &self.planar[g][k]) else {
                    continue;
                };
                steps.push((g, s));
                self.below(steps, &next_rho, &next_planar, out);
                steps.pop();
            }
        }
    }

    fn below_exact(&self, steps: &mut Vec<(usize, i64)>, out: &mut Vec<(GroupWord, Mat2)>) {
        let word = GroupWord::from_steps(steps);
        if self.rep.is_trivial(&word) {
            let p = self.planar_of(steps);
            if let Some(p) = p {
                if !is_central(&p) {
                    out.push((word, p));
                }
            }
        }
        if steps.len() == self.max_len {
            return;
        }
        for g in 0..self.images.len() {
            for s in [1i64, -1] {
                if let Some(&(pg, ps)) = steps.last() {
                    if pg == g && ps == -s {
                        continue;
                    }
                }
                steps.push((g, s));
                self.below_exact(steps, out);
                steps.pop();
            }
        }
    }

    fn planar_of(&self, steps: &[(usize, i64)]) -> Option<Mat2> {
        steps.iter().try_fold([[1, 0], [0, 1]], |acc, &(g, s)| mul2(&acc, &self.planar[g][if s > 0 { 0 } else { 1 }]))
    }
}

fn to_mat2(m: &PlanarMatrix) -> Mat2 {
    let [[a, b], [c, d]] = m.to_i64().expect("integral generator");
    [[a as i128, b as i128], [c as i128, d as i128]]
}

/// All freely reduced words of length at most `max_len` whose image under
/// `rep` is the identity and whose planar matrix is not `±I`, deduplicated by
/// planar matrix and ordered by length, then lexicographically.
pub fn enumerate_kernel(
    rep: &Representation,
    planar: &[PlanarMatrix],
    max_len: usize,
    subspace_index: usize,
) -> KernelSample {
    let search = Search {
        rep,
        images: rep.generator_images.iter().zip(&rep.inverse_images).map(|(m, i)| [m.clone(), i.clone()]).collect(),
        planar: planar.iter().map(|p| [to_mat2(p), to_mat2(&p.inverse())]).collect(),
        max_len,
    };
    let firsts: Vec<(usize, i64)> = (0..search.images.len()).flat_map(|g| [(g, 1i64), (g, -1)]).collect();
    let found: Vec<(GroupWord, Mat2)> = if max_len == 0 {
        Vec::new()
    } else {
        firsts
            .par_iter()
            .flat_map_iter(|&(g, s)| {
                let k = if s > 0 { 0 } else { 1 };
                let mut out = Vec::new();
                let mut steps = vec![(g, s)];
                match IntMatrix::identity(rep.dim()).checked_mul(&search.images[g][k]) {
                    Some(rho) => search.below(&mut steps, &rho, &search.planar[g][k], &mut out),
                    None => search.below_exact(&mut steps, &mut out),
                }
                out
            })
            .collect()
    };
    let mut by_matrix: BTreeMap<Mat2, GroupWord> = BTreeMap::new();
    for (w, m) in found {
        match by_matrix.get(&m) {
            Some(old) if (old.len(), old) <= (w.len(), &w) => {}
            _ => {
                by_matrix.insert(m, w);
            }
        }
    }
    let mut words: Vec<KernelWord> = by_matrix
        .into_iter()
        .filter_map(|(m, word)| {
            let matrix = [
                [i64::try_from(m[0][0]).ok()?, i64::try_from(m[0][1]).ok()?],
                [i64::try_from(m[1][0]).ok()?, i64::try_from(m[1][1]).ok()?],
            ];
            Some(KernelWord { word, matrix })
        })
        .collect();
    words.sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    KernelSample { subspace_index, words, max_word_length: max_len }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::InvariantSubspace;

    fn planar_pair() -> Vec<PlanarMatrix> {
        vec![PlanarMatrix::from_ints(1, 2, 0, 1).unwrap(), PlanarMatrix::from_ints(1, 0, 2, 1).unwrap()]
    }

    #[test]
    fn faithful_representation_has_empty_kernel() {
        // the planar action itself is faithful on the free group it generates
        let images =
            vec![IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]), IntMatrix::from_rows(&[vec![1, 0], vec![2, 1]])];
        let rep = Representation::new(images, InvariantSubspace::full(2)).unwrap();
        for len in 0..=6 {
            assert!(enumerate_kernel(&rep, &planar_pair(), len, 1).words.is_empty());
        }
    }

    #[test]
    fn trivial_representation_keeps_everything() {
        let images = vec![IntMatrix::identity(1), IntMatrix::identity(1)];
        let rep = Representation::new(images, InvariantSubspace::full(1)).unwrap();
        let s = enumerate_kernel(&rep, &planar_pair(), 3, 1);
        // 4 + 12 + 36 reduced words, all with distinct matrices in a free group
        assert_eq!(s.words.len(), 52);
        assert!(s.words.windows(2).all(|w| w[0].word.len() <= w[1].word.len()));
    }
}
