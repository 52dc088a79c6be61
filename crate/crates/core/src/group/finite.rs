use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Membership mask of a subset of a finite group.
pub type SubgroupMask = Vec<bool>;

/// A finite group given by its full multiplication table.
///
/// Text format: first line the order `n`, then `n` lines of `n`
/// space-separated indices, row `i` column `j` holding `i·j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidTable("table is not n×n over 0..n".into()));
            }
            let distinct: BTreeSet<_> = row.iter().collect();
            if distinct.len() != n {
                return Err(Error::InvalidTable("row is not a permutation".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
            inverses.push(inv);
        }
        // small tables: check associativity exhaustively, larger ones on a stride
        let stride = if n <= 32 { 1 } else { n / 16 };
        for a in (0..n).step_by(stride) {
            for b in (0..n).step_by(stride) {
                for c in (0..n).step_by(stride) {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverses })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidTable("missing order line".into()))?
            .parse()
            .map_err(|_| Error::InvalidTable("order is not an integer".into()))?;
        let mut table = Vec::with_capacity(n);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidTable("non-integer entry".into()))?;
            table.push(row);
        }
        if table.len() != n {
            return Err(Error::InvalidTable(format!("expected {n} rows, found {}", table.len())));
        }
        Self::from_table(table)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.order());
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    /// The group generated by permutations of `0..degree`, elements indexed
    /// in breadth-first order from the identity.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let degree = generators.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let x = compose(&elems[i], g);
                if !index.contains_key(&x) {
                    index.insert(x.clone(), elems.len());
                    elems.push(x);
                }
            }
            i += 1;
        }
        let table = elems.iter().map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect()).collect();
        Self::from_table(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.mul(a, b), self.inv(a)), self.inv(b))
    }

    pub fn mask(&self, elements: &[usize]) -> SubgroupMask {
        let mut m = vec![false; self.order()];
        for &e in elements {
            m[e] = true;
        }
        m
    }

    pub fn is_subgroup(&self, mask: &[bool]) -> bool {
        mask.len() == self.order()
            && mask[self.identity]
            && (0..self.order())
                .filter(|&a| mask[a])
                .all(|a| (0..self.order()).filter(|&b| mask[b]).all(|b| mask[self.mul(a, self.inv(b))]))
    }

    /// Exhaustive conjugation check.
    pub fn is_normal(&self, mask: &[bool]) -> bool {
        self.is_subgroup(mask)
            && (0..self.order())
                .all(|g| (0..self.order()).filter(|&h| mask[h]).all(|h| mask[self.mul(self.mul(g, h), self.inv(g))]))
    }

    /// Smallest subgroup containing the masked elements.
    pub fn closure(&self, mask: &[bool]) -> SubgroupMask {
        let mut m = mask.to_vec();
        m[self.identity] = true;
        loop {
            let members: Vec<usize> = (0..self.order()).filter(|&a| m[a]).collect();
            let mut grown = false;
            for &a in &members {
                for &b in &members {
                    let p = self.mul(a, b);
                    if !m[p] {
                        m[p] = true;
                        grown = true;
                    }
                }
            }
            if !grown {
                return m;
            }
        }
    }

    /// Every subgroup, found by adjoining one element at a time.
    pub fn subgroups(&self) -> Vec<SubgroupMask> {
        let trivial = self.mask(&[self.identity]);
        let mut seen: BTreeSet<SubgroupMask> = BTreeSet::from([trivial.clone()]);
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h[g] {
                    continue;
                }
                let mut m = h.clone();
                m[g] = true;
                let c = self.closure(&m);
                if seen.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn normal_subgroups(&self) -> Vec<SubgroupMask> {
        self.subgroups().into_iter().filter(|m| self.is_normal(m)).collect()
    }
}

/// Brute-force check that `[A, B] ⊂ A ∩ B` for normal subgroups `A`, `B`.
///
/// Returns the verdict; a `false` can only come from a broken table or a bug.
pub fn commutator_in_intersection(g: &FiniteGroupTable, a: &[bool], b: &[bool]) -> Result<bool> {
    if !g.is_normal(a) {
        return Err(Error::NotNormal("A"));
    }
    if !g.is_normal(b) {
        return Err(Error::NotNormal("B"));
    }
    let n = g.order();
    Ok((0..n).filter(|&x| a[x]).all(|x| {
        (0..n).filter(|&y| b[y]).all(|y| {
            let c = g.commutator(x, y);
            a[c] && b[c]
        })
    }))
}
