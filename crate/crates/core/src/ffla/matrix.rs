use serde::{Deserialize, Serialize};

use super::elim;
use super::field::FieldCtx;
use super::subspace::Subspace;

/// Dense row-major matrix with entries reduced modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

/// Outcome of [`FqMatrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Consistent(Vec<u64>),
    Inconsistent,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        FqMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix with the given vectors as columns.
    pub fn from_cols(cols: &[Vec<u64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn from_i64(f: &FieldCtx, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        FqMatrix {
            rows,
            cols,
            data: vals.iter().map(|&v| f.from_i64(v)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, r: &[u64]) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = r.len();
        }
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldCtx, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        let cap = f.lazy_capacity().max(1);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut n = 0;
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let brow = other.row(k);
                if cap > 1 {
                    for (x, &b) in acc.iter_mut().zip(brow) {
                        *x += a * b;
                    }
                    n += 1;
                    if n + 1 >= cap {
                        acc.iter_mut().for_each(|x| *x %= f.p());
                        n = 0;
                    }
                } else {
                    for (x, &b) in acc.iter_mut().zip(brow) {
                        *x = f.mul_add(*x, a, b);
                    }
                }
            }
            for (o, &x) in out.row_mut(i).iter_mut().zip(&acc) {
                *o = x % f.p();
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| f.dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix: `v^T A`.
    pub fn vec_mul(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0u64; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(self.row(i)) {
                    *o = f.mul_add(*o, c, x);
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FieldCtx, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &FieldCtx, c: u64) -> FqMatrix {
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        let mut d = self.data.clone();
        // eliminate along the longer side for better panel efficiency
        if self.rows >= self.cols {
            elim::rank_in_place(f, &mut d, self.rows, self.cols)
        } else {
            let t = self.transpose();
            d = t.data;
            elim::rank_in_place(f, &mut d, self.cols, self.rows)
        }
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self, f: &FieldCtx) -> (FqMatrix, Vec<usize>) {
        let mut d = self.data.clone();
        let piv = elim::rref_in_place(f, &mut d, self.rows, self.cols);
        d.truncate(piv.len() * self.cols);
        (
            FqMatrix {
                rows: piv.len(),
                cols: self.cols,
                data: d,
            },
            piv,
        )
    }

    /// Right null space.
    pub fn kernel(&self, f: &FieldCtx) -> Subspace {
        let (r, piv) = self.rref(f);
        let n = self.cols;
        let mut is_piv = vec![false; n];
        for &c in &piv {
            is_piv[c] = true;
        }
        let mut basis = FqMatrix::zeros(0, n);
        for free in (0..n).filter(|&c| !is_piv[c]) {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (k, &pc) in piv.iter().enumerate() {
                v[pc] = f.neg(r.get(k, free));
            }
            basis.push_row(&v);
        }
        Subspace::from_rows(f, n, basis)
    }

    /// Left null space: `{v : v^T A = 0}`.
    pub fn left_kernel(&self, f: &FieldCtx) -> Subspace {
        self.transpose().kernel(f)
    }

    /// Column space as a subspace of `F^rows`.
    pub fn image(&self, f: &FieldCtx) -> Subspace {
        Subspace::from_rows(f, self.rows, self.transpose())
    }

    /// One solution of `A x = rhs`, or `Inconsistent`.
    pub fn solve(&self, f: &FieldCtx, rhs: &[u64]) -> Solve {
        assert_eq!(rhs.len(), self.rows);
        let n = self.cols;
        let mut aug = FqMatrix::zeros(self.rows, n + 1);
        for (i, &b) in rhs.iter().enumerate() {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n, b);
        }
        let (r, piv) = aug.rref(f);
        if piv.last() == Some(&n) {
            return Solve::Inconsistent;
        }
        let mut x = vec![0u64; n];
        for (k, &pc) in piv.iter().enumerate() {
            x[pc] = r.get(k, n);
        }
        Solve::Consistent(x)
    }

    pub fn det(&self, f: &FieldCtx) -> u64 {
        assert_eq!(self.rows, self.cols);
        let mut d = self.data.clone();
        elim::det_in_place(f, &mut d, self.rows)
    }

    pub fn inverse(&self, f: &FieldCtx) -> Option<FqMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FqMatrix::zeros(n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n + i, 1);
        }
        let (r, piv) = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FqMatrix::zeros(n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&r.row(i)[n..]);
        }
        Some(inv)
    }

    /// Classical adjugate, valid for any rank: `A adj(A) = det(A) I`.
    pub fn adjugate(&self, f: &FieldCtx) -> FqMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if let Some(inv) = self.inverse(f) {
            return inv.scale(f, self.det(f));
        }
        if self.rank(f) < n - 1 {
            return FqMatrix::zeros(n, n);
        }
        let mut adj = FqMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(&skip(n, j), &skip(n, i));
                let d = m.det(f);
                adj.set(i, j, if (i + j) % 2 == 0 { d } else { f.neg(d) });
            }
        }
        adj
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> FqMatrix {
        let mut m = FqMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn trace(&self, f: &FieldCtx) -> u64 {
        (0..self.rows.min(self.cols)).fold(0, |s, i| f.add(s, self.get(i, i)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew(&self, f: &FieldCtx) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self.get(i, j) == f.neg(self.get(j, i))))
    }
}

fn skip(n: usize, k: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f = FieldCtx::new(101).unwrap();
        assert_eq!(FqMatrix::zeros(3, 3).rank(&f), 0);
        assert_eq!(FqMatrix::identity(3).rank(&f), 3);
        assert_eq!(FqMatrix::identity(4).kernel(&f).dim(), 0);
        let k = FqMatrix::from_rows(&[vec![1, 1]]).kernel(&f);
        assert_eq!(k.basis.row_vecs(), vec![vec![1, 100]]);
        assert_eq!(
            FqMatrix::identity(3).solve(&f, &[1, 0, 0]),
            Solve::Consistent(vec![1, 0, 0])
        );
        assert_eq!(
            FqMatrix::zeros(2, 2).solve(&f, &[1, 0]),
            Solve::Inconsistent
        );
    }

    #[test]
    fn adjugate_of_corank_one() {
        let f = FieldCtx::new(101).unwrap();
        let a = FqMatrix::from_i64(&f, 3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let adj = a.adjugate(&f);
        assert!(a.mul(&f, &adj).is_zero());
        assert!(!adj.is_zero());
    }
}
