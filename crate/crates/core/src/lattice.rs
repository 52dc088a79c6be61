//! Dense integer matrices and the lattice computations built on them:
//! fraction-free rank and determinant, Smith normal form with transforms,
//! row Hermite normal form, saturation and integer solving.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<i128>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<i128> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    /// Product with overflow detection.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.checked_mul(other[(k, j)])?;
                    out[(i, j)] = out[(i, j)].checked_add(p)?;
                }
            }
        }
        Some(out)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols: Vec<Vec<i128>> = (0..self.cols).map(|j| self.col(j)).collect();
        cols.extend((0..other.cols).map(|j| other.col(j)));
        Self::from_cols(self.rows, &cols)
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Self {
        let cols: Vec<Vec<i128>> = range.map(|j| self.col(j)).collect();
        Self::from_cols(self.rows, &cols)
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        let rows: Vec<Vec<i128>> = range.map(|i| self.row(i)).collect();
        if rows.is_empty() {
            return Self::zeros(0, self.cols);
        }
        Self::from_rows(&rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row `dst` += c · row `src`
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col `dst` += c · col `src`
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut prev = 1i128;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m[(r, col)] != 0) else { continue };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                for c in col + 1..m.cols {
                    m[(r, c)] = (m[(rank, col)] * m[(r, c)] - m[(r, col)] * m[(rank, c)]) / prev;
                }
                m[(r, col)] = 0;
            }
            prev = m[(rank, col)];
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix by Bareiss elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[(r, k)] != 0) else { return 0 };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[(i, j)] = (m[(k, k)] * m[(i, j)] - m[(i, k)] * m[(k, j)]) / prev;
                }
            }
            prev = m[(k, k)];
        }
        sign * m[(n - 1, n - 1)]
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self);
        if (0..self.rows).any(|i| snf.diagonal.get(i).copied().unwrap_or(0) != 1) {
            return None;
        }
        // P·A·Q = I  ⇒  A⁻¹ = Q·P
        snf.right.checked_mul(&snf.left)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("integer overflow in matrix product")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// `left · A · right = D` with `left`, `right` unimodular and `D` diagonal,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diagonal: Vec<i128>,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)] != 0 && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                let f = d[(i, t)].div_euclid(d[(t, t)]);
                if f != 0 {
                    d.add_row(i, t, -f);
                    p.add_row(i, t, -f);
                }
                if d[(i, t)] != 0 {
                    clean = false;
                    d.swap_rows(t, i);
                    p.swap_rows(t, i);
                }
            }
            for j in t + 1..n {
                let f = d[(t, j)].div_euclid(d[(t, t)]);
                if f != 0 {
                    d.add_col(j, t, -f);
                    q.add_col(j, t, -f);
                }
                if d[(t, j)] != 0 {
                    clean = false;
                    d.swap_cols(t, j);
                    q.swap_cols(t, j);
                }
            }
            if clean {
                // divisibility of the trailing block by the pivot
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[(i, j)] % d[(t, t)] != 0));
                match bad {
                    Some(i) => {
                        d.add_row(t, i, 1);
                        p.add_row(t, i, 1);
                    }
                    None => break,
                }
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    let diagonal: Vec<i128> = (0..m.min(n)).map(|i| d[(i, i)]).collect();
    let rank = diagonal.iter().filter(|&&x| x != 0).count();
    SmithForm { left: p, right: q, diagonal, rank }
}

/// Nonzero elementary divisors of the column lattice of `a`.
pub fn elementary_divisors(a: &IntMatrix) -> Vec<i128> {
    smith_normal_form(a).diagonal.into_iter().filter(|&x| x != 0).collect()
}

/// Row-style Hermite normal form of the row lattice of `a`: echelon rows with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.rows).filter(|&i| m[(i, c)] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[(i, c)].abs()).unwrap();
            m.swap_rows(r, piv);
            let mut done = true;
            for i in r + 1..m.rows {
                let f = m[(i, c)].div_euclid(m[(r, c)]);
                if f != 0 {
                    m.add_row(i, r, -f);
                }
                if m[(i, c)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..m.rows).all(|i| m[(i, c)] == 0) {
            continue;
        }
        if m[(r, c)] < 0 {
            m.negate_row(r);
        }
        for i in 0..r {
            let f = m[(i, c)].div_euclid(m[(r, c)]);
            if f != 0 {
                m.add_row(i, r, -f);
            }
        }
        r += 1;
    }
    m.select_rows(0..r)
}

/// Basis (as columns) of the saturation `span_ℚ(A) ∩ ℤⁿ` of the column
/// lattice of `a`, in Hermite normal form.
pub fn saturate(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let pinv = snf.left.inverse_unimodular().expect("Smith transform is unimodular");
    let basis = pinv.select_cols(0..snf.rank);
    hermite_rows(&basis.transpose()).transpose()
}

/// Integer coordinates `x` with `basis · x = v`, if they exist.
pub fn solve_integer(basis: &IntMatrix, v: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(basis.rows, v.len());
    let snf = smith_normal_form(basis);
    let pv = snf.left.mul_vec(v);
    let mut y = vec![0i128; basis.cols];
    for (i, &pvi) in pv.iter().enumerate() {
        if i < snf.rank {
            let di = snf.diagonal[i];
            if pvi % di != 0 {
                return None;
            }
            y[i] = pvi / di;
        } else if pvi != 0 {
            return None;
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// True when `v` lies in the rational span of the columns of `basis`.
pub fn in_rational_span(basis: &IntMatrix, v: &[i128]) -> bool {
    let aug = basis.hstack(&IntMatrix::from_cols(v.len(), &[v.to_vec()]));
    aug.rank() == basis.rank()
}

/// gcd of the entries (0 for the zero vector).
pub fn content(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| gcd(g, x.abs()))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
