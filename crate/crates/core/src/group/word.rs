use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator raised to a nonzero power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

/// A freely reduced word in numbered generators.
///
/// Adjacent letters always carry distinct generators. Only free reduction is
/// applied, so two different words may still denote the same group element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self::from_letters([Letter { generator: index, exponent: 1 }])
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Self { letters: out }
    }

    /// Builds a word from signed unit steps `(generator, ±1)`.
    pub fn from_steps(steps: &[(usize, i64)]) -> Self {
        Self::from_letters(steps.iter().map(|&(generator, exponent)| Letter { generator, exponent }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Length counted with multiplicity: the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.exponent.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { generator: l.generator, exponent: -l.exponent })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Self { letters: out }
    }

    /// `self · other · self⁻¹ · other⁻¹`, freely reduced.
    pub fn commutator(&self, other: &Self) -> Self {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    /// `by · self · by⁻¹`.
    pub fn conjugate_by(&self, by: &Self) -> Self {
        by.concat(self).concat(&by.inverse())
    }

    /// Unit steps `(generator, ±1)` in order.
    pub fn steps(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.letters.iter().flat_map(|l| {
            std::iter::repeat_n((l.generator, l.exponent.signum()), l.exponent.unsigned_abs() as usize)
        })
    }

    /// Evaluates the word in a group given generator images and their inverses.
    pub fn evaluate<M, F>(&self, identity: M, images: &[M], inverses: &[M], mul: F) -> M
    where
        M: Clone,
        F: Fn(&M, &M) -> M,
    {
        self.steps().fold(identity, |acc, (g, s)| if s > 0 { mul(&acc, &images[g]) } else { mul(&acc, &inverses[g]) })
    }

    /// All freely reduced words of length exactly `len` in `generators`
    /// generators, in lexicographic step order.
    pub fn all_of_length(generators: usize, len: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut steps: Vec<(usize, i64)> = Vec::with_capacity(len);
        fn rec(g: usize, len: usize, steps: &mut Vec<(usize, i64)>, out: &mut Vec<GroupWord>) {
            if steps.len() == len {
                out.push(GroupWord::from_steps(steps));
                return;
            }
            for gen in 0..g {
                for s in [1i64, -1] {
                    if let Some(&(pg, ps)) = steps.last() {
                        if pg == gen && ps == -s {
                            continue;
                        }
                    }
                    steps.push((gen, s));
                    rec(g, len, steps, out);
                    steps.pop();
                }
            }
        }
        rec(generators, len, &mut steps, &mut out);
        out
    }

    /// All freely reduced words of length at most `max_len`, shortest first.
    pub fn ball(generators: usize, max_len: usize) -> Vec<Self> {
        (0..=max_len).flat_map(|l| Self::all_of_length(generators, l)).collect()
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if l.exponent == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.generator == l.generator => {
            last.exponent += l.exponent;
            if last.exponent == 0 {
                out.pop();
            }
        }
        _ => out.push(l),
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}^{}", l.generator, l.exponent)?;
        }
        Ok(())
    }
}
