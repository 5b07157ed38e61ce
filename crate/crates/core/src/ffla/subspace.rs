use serde::{Deserialize, Serialize};

use super::field::FieldCtx;
use super::matrix::FqMatrix;

/// Linear subspace of `F_p^n` stored by its reduced row echelon basis.
///
/// The representation is canonical, so two subspaces are equal exactly when
/// the structs compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: FqMatrix,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: FqMatrix::zeros(0, n),
            pivots: vec![],
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: FqMatrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_rows(f: &FieldCtx, n: usize, m: FqMatrix) -> Self {
        if m.rows == 0 {
            return Self::zero(n);
        }
        assert_eq!(m.cols, n);
        let (basis, pivots) = m.rref(f);
        Subspace {
            ambient_dim: n,
            basis,
            pivots,
        }
    }

    pub fn span(f: &FieldCtx, n: usize, vecs: &[Vec<u64>]) -> Self {
        if vecs.is_empty() {
            return Self::zero(n);
        }
        Self::from_rows(f, n, FqMatrix::from_rows(vecs))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.basis.row_vecs()
    }

    /// Reduce `v` modulo the subspace: the result vanishes at every pivot column.
    pub fn reduce(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        let mut r = v.to_vec();
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = r[pc];
            if c != 0 {
                let m = f.neg(c);
                for (x, &b) in r.iter_mut().zip(self.basis.row(k)) {
                    *x = f.mul_add(*x, m, b);
                }
            }
        }
        r
    }

    pub fn contains(&self, f: &FieldCtx, v: &[u64]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, f: &FieldCtx, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(f, other.basis.row(i)))
    }

    /// Coordinates of a member `v` in the echelon basis (its pivot entries).
    pub fn coords(&self, f: &FieldCtx, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(f, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c]).collect())
    }

    /// Linear combination of basis rows.
    pub fn combine(&self, f: &FieldCtx, c: &[u64]) -> Vec<u64> {
        self.basis.vec_mul(f, c)
    }

    /// Columns not carrying a pivot; they index a complement of the subspace.
    pub fn nonpivots(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.ambient_dim];
        for &c in &self.pivots {
            is_piv[c] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_piv[c]).collect()
    }

    /// Coordinates of the class of `v` in `F^n / self`.
    pub fn quotient_coords(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        let r = self.reduce(f, v);
        self.nonpivots().into_iter().map(|c| r[c]).collect()
    }

    pub fn sum(&self, f: &FieldCtx, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut m = self.basis.clone();
        for i in 0..other.dim() {
            m.push_row(other.basis.row(i));
        }
        Subspace::from_rows(f, self.ambient_dim, m)
    }

    pub fn span_union(f: &FieldCtx, n: usize, spaces: &[Subspace]) -> Subspace {
        let mut m = FqMatrix::zeros(0, n);
        for s in spaces {
            assert_eq!(s.ambient_dim, n);
            for i in 0..s.dim() {
                m.push_row(s.basis.row(i));
            }
        }
        Subspace::from_rows(f, n, m)
    }

    /// Orthogonal complement under the standard pairing.
    pub fn annihilator(&self, f: &FieldCtx) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        self.basis.kernel(f)
    }

    pub fn intersect(&self, f: &FieldCtx, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let a = self.annihilator(f);
        let b = other.annihilator(f);
        a.sum(f, &b).annihilator(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplanes_meet_in_codim_two() {
        let f = FieldCtx::new(101).unwrap();
        let h1 = FqMatrix::from_rows(&[vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10]]).kernel(&f);
        let h2 = FqMatrix::from_rows(&[vec![0, 0, 1, 0, 0, 0, 5, 0, 0, 1]]).kernel(&f);
        assert_eq!(h1.dim(), 9);
        assert_eq!(h1.intersect(&f, &h2).dim(), 8);
        assert_eq!(h1.intersect(&f, &h1), h1);
    }

    #[test]
    fn quotient_coordinates_vanish_on_members() {
        let f = FieldCtx::new(101).unwrap();
        let s = Subspace::span(&f, 4, &[vec![1, 2, 0, 3], vec![0, 1, 1, 1]]);
        let v = s.combine(&f, &[5, 7]);
        assert_eq!(s.quotient_coords(&f, &v), vec![0, 0]);
        assert_eq!(s.coords(&f, &v), Some(vec![5, 7]));
    }
}
