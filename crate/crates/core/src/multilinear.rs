//! Concrete bases for the Schur modules `S2`, `S3`, `S21` of a 4-dimensional
//! space and alternating tensors on a 10-dimensional one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::{MPoly, MonomialBasis};

/// Index of `e_i ∧ e_j` (`i < j`) in lexicographic order on pairs.
pub fn wedge2_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn wedge2_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn wedge3_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                v.push((i, j, k));
            }
        }
    }
    v
}

/// Index of `e_i ∧ e_j ∧ e_k` (`i < j < k`) in lexicographic order.
pub fn wedge3_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    // triples starting below i
    let mut idx = 0;
    for a in 0..i {
        let m = n - a - 1;
        idx += m * (m - 1) / 2;
    }
    // pairs (j, k) in range i+1..n before (j, k)
    let m = n - i - 1;
    let (jj, kk) = (j - i - 1, k - i - 1);
    idx + wedge2_index(m, jj, kk)
}

/// Wedge product of two vectors as a vector in `∧^2`.
pub fn wedge2(f: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    wedge2_pairs(n)
        .into_iter()
        .map(|(i, j)| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])))
        .collect()
}

/// Explicit model of `S2 ⊗ V* = S21 ⊕ S3` for `dim V = 4`.
///
/// Coordinates on `S2 ⊗ V*` are indexed by `s * 4 + k` where `s` runs over
/// degree-2 monomials of `x0..x3` and `k` over the linear forms `x_k`.
#[derive(Clone, Debug)]
pub struct Schur4 {
    pub s2: MonomialBasis,
    pub s3: MonomialBasis,
    /// Multiplication `S2 ⊗ V* -> S3`, `20 x 40`.
    pub sym: FqMatrix,
    /// Splitting `S3 -> S2 ⊗ V*`, `g ↦ (1/3) Σ ∂_k g ⊗ x_k`, `40 x 20`.
    pub iota: FqMatrix,
    /// Projector `id - ι∘sym` onto `S21`, `40 x 40`.
    pub pi21: FqMatrix,
    /// `S21 = ker(sym)` with its echelon basis; coordinates are pivot entries.
    pub s21: Subspace,
}

impl Schur4 {
    pub fn new(f: &FieldCtx) -> Self {
        let s2 = MonomialBasis::new(4, 2);
        let s3 = MonomialBasis::new(4, 3);
        let mut sym = FqMatrix::zeros(20, 40);
        for (s, e) in s2.exps.iter().enumerate() {
            for k in 0..4 {
                let mut e3 = e.clone();
                e3[k] += 1;
                sym.set(s3.index_of(&e3).unwrap(), s * 4 + k, 1);
            }
        }
        let third = f.inv(3);
        let mut iota = FqMatrix::zeros(40, 20);
        for (c, e) in s3.exps.iter().enumerate() {
            let g = MPoly::monomial(e.clone(), 1);
            for k in 0..4 {
                let d = g.derivative(f, k);
                for (de, &v) in &d.terms {
                    let s = s2.index_of(de).unwrap();
                    iota.set(s * 4 + k, c, f.mul(v, third));
                }
            }
        }
        let proj = iota.mul(f, &sym);
        let mut pi21 = FqMatrix::identity(40);
        for (x, &y) in pi21.data.iter_mut().zip(&proj.data) {
            *x = f.sub(*x, y);
        }
        let s21 = sym.kernel(f);
        Schur4 {
            s2,
            s3,
            sym,
            iota,
            pi21,
            s21,
        }
    }

    /// Component of `v ∈ S2 ⊗ V*` along `S21`.
    pub fn s21_project(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        self.pi21.mul_vec(f, v)
    }

    /// Coordinates of `π21(v)` in the fixed 20-dimensional basis of `S21`.
    pub fn s21_coords(&self, f: &FieldCtx, v: &[u64]) -> Vec<u64> {
        let w = self.s21_project(f, v);
        self.s21.pivots.iter().map(|&c| w[c]).collect()
    }

    /// The tensor `f ⊗ x` for a quadric `q` (coefficients on `s2`) and a
    /// linear form `x`.
    pub fn tensor(&self, f: &FieldCtx, q: &[u64], x: &[u64]) -> Vec<u64> {
        let mut v = vec![0; 40];
        for s in 0..10 {
            for k in 0..4 {
                v[s * 4 + k] = f.mul(q[s], x[k]);
            }
        }
        v
    }
}

/// Alternating 3-form on a 10-dimensional space, stored by its coefficients
/// on `i < j < k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trivector {
    pub dim: usize,
    pub coeffs: Vec<u64>,
    /// `true` for an element of `∧^3 V10*`, `false` for `∧^3 V10`.
    pub dual: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TrivectorEntry {
    i: usize,
    j: usize,
    k: usize,
    coeff: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct TrivectorRepr {
    dim: usize,
    dual: bool,
    entries: Vec<TrivectorEntry>,
}

impl Serialize for Trivector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = wedge3_triples(self.dim)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|((i, j, k), &coeff)| TrivectorEntry { i, j, k, coeff })
            .collect();
        TrivectorRepr {
            dim: self.dim,
            dual: self.dual,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Trivector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TrivectorRepr::deserialize(d)?;
        let mut t = Trivector::zero(r.dim, r.dual);
        for e in r.entries {
            if !(e.i < e.j && e.j < e.k && e.k < r.dim) {
                return Err(serde::de::Error::custom("trivector index out of order"));
            }
            t.coeffs[wedge3_index(r.dim, e.i, e.j, e.k)] = e.coeff;
        }
        Ok(t)
    }
}

impl Trivector {
    pub fn zero(dim: usize, dual: bool) -> Self {
        Trivector {
            dim,
            coeffs: vec![0; crate::mpoly::binomial(dim, 3)],
            dual,
        }
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<u64>, dual: bool) -> Self {
        assert_eq!(coeffs.len(), crate::mpoly::binomial(dim, 3));
        Trivector { dim, coeffs, dual }
    }

    /// Build from a full `n x n x n` tensor `c[(a*n + b)*n + c]`, checking all
    /// six permutation signs.
    pub fn from_tensor(f: &FieldCtx, n: usize, c: &[u64], dual: bool) -> Result<Self> {
        assert_eq!(c.len(), n * n * n);
        let at = |a: usize, b: usize, d: usize| c[(a * n + b) * n + d];
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let v = at(a, b, d);
                    let bad = if a == b || b == d || a == d {
                        v != 0
                    } else {
                        let m = f.neg(v);
                        at(b, a, d) != m || at(a, d, b) != m || at(d, b, a) != m
                    };
                    if bad {
                        let mut t = [a, b, d];
                        t.sort();
                        return Err(Error::NotAlternating {
                            triple: (t[0], t[1], t[2]),
                        });
                    }
                }
            }
        }
        let coeffs = wedge3_triples(n)
            .into_iter()
            .map(|(i, j, k)| at(i, j, k))
            .collect();
        Ok(Trivector {
            dim: n,
            coeffs,
            dual,
        })
    }

    /// Value `t(e_a, e_b, e_c)` with signs for any index order.
    pub fn get(&self, f: &FieldCtx, a: usize, b: usize, c: usize) -> u64 {
        if a == b || b == c || a == c {
            return 0;
        }
        let mut t = [a, b, c];
        let mut sign = false;
        // bubble sort tracking parity
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        let v = self.coeffs[wedge3_index(self.dim, t[0], t[1], t[2])];
        if sign {
            f.neg(v)
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Trilinear evaluation `t(u, v, w)`.
    pub fn eval3(&self, f: &FieldCtx, u: &[u64], v: &[u64], w: &[u64]) -> u64 {
        let m = self.contract(f, u);
        f.dot(&m.mul_vec(f, w), v)
    }

    /// Skew matrix `(t(v, e_i, e_j))_{ij}`.
    pub fn contract(&self, f: &FieldCtx, v: &[u64]) -> FqMatrix {
        let n = self.dim;
        assert_eq!(v.len(), n);
        let mut m = FqMatrix::zeros(n, n);
        for (idx, (i, j, k)) in wedge3_triples(n).into_iter().enumerate() {
            let c = self.coeffs[idx];
            if c == 0 {
                continue;
            }
            // t(v, e_j, e_k) gets v_i c, etc. with cyclic signs
            for &(x, a, b) in &[(i, j, k), (j, k, i), (k, i, j)] {
                if v[x] != 0 {
                    let val = f.mul(v[x], c);
                    m.set(a, b, f.add(m.get(a, b), val));
                    m.set(b, a, f.sub(m.get(b, a), val));
                }
            }
        }
        m
    }

    /// Two-slot contraction `t(u, v, ·)` as a linear form.
    pub fn contract2(&self, f: &FieldCtx, u: &[u64], v: &[u64]) -> Vec<u64> {
        self.contract(f, u).vec_mul(f, v)
    }

    /// `n x C(n,2)` matrix with entries `t_{x i j}` for `i < j`.
    pub fn flattening(&self, f: &FieldCtx) -> FqMatrix {
        let n = self.dim;
        let pairs = wedge2_pairs(n);
        let mut m = FqMatrix::zeros(n, pairs.len());
        for x in 0..n {
            for (c, &(i, j)) in pairs.iter().enumerate() {
                m.set(x, c, self.get(f, x, i, j));
            }
        }
        m
    }

    /// Scale so that the first nonzero coefficient is 1; returns the factor
    /// that was applied.
    pub fn normalize(&mut self, f: &FieldCtx) -> u64 {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&lead) => {
                let inv = f.inv(lead);
                for c in &mut self.coeffs {
                    *c = f.mul(*c, inv);
                }
                inv
            }
            None => 1,
        }
    }

    /// Values of `t` on all triples from a basis of a subspace.
    pub fn restricted_values(&self, f: &FieldCtx, basis: &[Vec<u64>]) -> Vec<u64> {
        let k = basis.len();
        let mut out = Vec::new();
        for a in 0..k {
            let m = self.contract(f, &basis[a]);
            for b in a + 1..k {
                let lf = m.vec_mul(f, &basis[b]);
                for w in &basis[b + 1..] {
                    out.push(f.dot(&lf, w));
                }
            }
        }
        out
    }

    /// Apply the linear substitution `t'(u,v,w) = t(Au, Av, Aw)`.
    pub fn pullback(&self, f: &FieldCtx, a: &FqMatrix) -> Trivector {
        let n = self.dim;
        let cols: Vec<Vec<u64>> = (0..n).map(|j| a.col(j)).collect();
        let coeffs = wedge3_triples(n)
            .into_iter()
            .map(|(i, j, k)| self.eval3(f, &cols[i], &cols[j], &cols[k]))
            .collect();
        Trivector {
            dim: n,
            coeffs,
            dual: self.dual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schur_dimensions() {
        let f = FieldCtx::new(101).unwrap();
        let s = Schur4::new(&f);
        assert_eq!(s.s21.dim(), 20);
        // projector: idempotent with image ker(sym)
        let pp = s.pi21.mul(&f, &s.pi21);
        assert_eq!(pp, s.pi21);
        assert!(s.sym.mul(&f, &s.pi21).is_zero());
        assert_eq!(s.pi21.rank(&f), 20);
    }

    #[test]
    fn cube_projects_to_zero() {
        let f = FieldCtx::new(101).unwrap();
        let s = Schur4::new(&f);
        let x = [3u64, 1, 4, 1];
        let sq = MPoly::linear(&x).pow(&f, 2).to_dense(&s.s2);
        let t = s.tensor(&f, &sq, &x);
        assert!(s.s21_project(&f, &t).iter().all(|&c| c == 0));
    }

    #[test]
    fn wedge_indices() {
        let pairs = wedge2_pairs(10);
        assert_eq!(pairs.len(), 45);
        for (c, &(i, j)) in pairs.iter().enumerate() {
            assert_eq!(wedge2_index(10, i, j), c);
        }
        let tr = wedge3_triples(10);
        assert_eq!(tr.len(), 120);
        for (c, &(i, j, k)) in tr.iter().enumerate() {
            assert_eq!(wedge3_index(10, i, j, k), c);
        }
    }

    #[test]
    fn elementary_trivector() {
        let f = FieldCtx::new(101).unwrap();
        let n = 10;
        let mut c = vec![0u64; 1000];
        let perms = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([1, 0, 2], 100),
            ([0, 2, 1], 100),
            ([2, 1, 0], 100),
        ];
        for (p, v) in perms {
            c[(p[0] * n + p[1]) * n + p[2]] = v;
        }
        let t = Trivector::from_tensor(&f, n, &c, false).unwrap();
        assert_eq!(t.coeffs[0], 1);
        assert_eq!(t.coeffs.iter().filter(|&&x| x != 0).count(), 1);
        let mut sym = vec![0u64; 1000];
        sym[n + 2] = 1; // (0, 1, 2)
        sym[n * n + 2] = 1; // (1, 0, 2)
        assert!(Trivector::from_tensor(&f, n, &sym, false).is_err());
    }
}
