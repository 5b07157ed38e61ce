use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::monomial::{pack, Exps, MonomialBasis};
use crate::ffla::{FieldCtx, Fp2, FqMatrix};

/// Homogeneous polynomial over `F_p` with sparse terms.
///
/// Terms are keyed by exponent vector; iteration in reverse key order is the
/// graded lexicographic order used for serialization and coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct MPoly {
    pub nvars: usize,
    pub degree: u32,
    pub terms: BTreeMap<Exps, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    coeff: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    degree: u32,
    terms: Vec<TermRepr>,
}

impl From<MPoly> for PolyRepr {
    fn from(p: MPoly) -> Self {
        PolyRepr {
            nvars: p.nvars,
            degree: p.degree,
            terms: p
                .terms
                .into_iter()
                .rev()
                .map(|(exponents, coeff)| TermRepr { exponents, coeff })
                .collect(),
        }
    }
}

impl TryFrom<PolyRepr> for MPoly {
    type Error = String;
    fn try_from(r: PolyRepr) -> Result<Self, String> {
        let mut terms = BTreeMap::new();
        for t in r.terms {
            if t.exponents.len() != r.nvars || t.exponents.iter().sum::<u32>() != r.degree {
                return Err(format!("term {:?} does not fit the ring", t.exponents));
            }
            if t.coeff != 0 {
                terms.insert(t.exponents, t.coeff);
            }
        }
        Ok(MPoly {
            nvars: r.nvars,
            degree: r.degree,
            terms,
        })
    }
}

impl MPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        MPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: u64) -> Self {
        let mut p = Self::zero(nvars, 0);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, 1);
        p.terms.insert(e, 1);
        p
    }

    pub fn monomial(exps: Exps, c: u64) -> Self {
        let nvars = exps.len();
        let degree = exps.iter().sum();
        let mut p = Self::zero(nvars, degree);
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[u64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    fn add_term(&mut self, f: &FieldCtx, e: Exps, c: u64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let v = f.add(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn add(&self, f: &FieldCtx, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(f, e.clone(), c);
        }
        out
    }

    pub fn scale(&self, f: &FieldCtx, c: u64) -> MPoly {
        let mut out = Self::zero(self.nvars, self.degree);
        if c == 0 {
            return out;
        }
        for (e, &v) in &self.terms {
            out.terms.insert(e.clone(), f.mul(v, c));
        }
        out
    }

    pub fn sub(&self, f: &FieldCtx, other: &MPoly) -> MPoly {
        self.add(f, &other.scale(f, f.p() - 1))
    }

    pub fn mul(&self, f: &FieldCtx, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: HashMap<Exps, u64> = HashMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = f.mul_add(*slot, c1, c2);
            }
        }
        MPoly {
            nvars: self.nvars,
            degree: self.degree + other.degree,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn pow(&self, f: &FieldCtx, k: u32) -> MPoly {
        let mut r = MPoly::constant(self.nvars, 1);
        for _ in 0..k {
            r = r.mul(f, self);
        }
        r
    }

    pub fn evaluate(&self, f: &FieldCtx, pt: &[u64]) -> u64 {
        assert_eq!(pt.len(), self.nvars);
        let d = self.degree as usize;
        let pows: Vec<Vec<u64>> = pt
            .iter()
            .map(|&x| {
                let mut v = vec![1u64; d + 1];
                for i in 1..=d {
                    v[i] = f.mul(v[i - 1], x);
                }
                v
            })
            .collect();
        self.terms.iter().fold(0, |s, (e, &c)| {
            let m = e.iter().enumerate().fold(c, |acc, (i, &k)| {
                if k == 0 {
                    acc
                } else {
                    f.mul(acc, pows[i][k as usize])
                }
            });
            f.add(s, m)
        })
    }

    pub fn evaluate_ext(&self, f: &FieldCtx, pt: &[Fp2]) -> Fp2 {
        assert_eq!(pt.len(), self.nvars);
        let mut s = Fp2::ZERO;
        for (e, &c) in &self.terms {
            let mut m = Fp2::base(c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = f.mul2(m, pt[i]);
                }
            }
            s = f.add2(s, m);
        }
        s
    }

    pub fn derivative(&self, f: &FieldCtx, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                let k = e2[i];
                e2[i] -= 1;
                let v = f.mul(c, k as u64 % f.p());
                if v != 0 {
                    out.terms.insert(e2, v);
                }
            }
        }
        out
    }

    pub fn gradient(&self, f: &FieldCtx) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.derivative(f, i)).collect()
    }

    /// Substitute `x_i = sum_j emb[i][j] y_j`; `emb` is `nvars x m`.
    pub fn restrict(&self, f: &FieldCtx, emb: &FqMatrix) -> MPoly {
        assert_eq!(emb.rows, self.nvars);
        let m = emb.cols;
        let d = self.degree as usize;
        let lin: Vec<MPoly> = (0..self.nvars).map(|i| MPoly::linear(emb.row(i))).collect();
        // cache powers of each substituted linear form
        let mut pows: Vec<Vec<MPoly>> = Vec::with_capacity(self.nvars);
        for l in &lin {
            let mut v = vec![MPoly::constant(m, 1)];
            let used = self.terms.keys().map(|e| e[pows.len()]).max().unwrap_or(0) as usize;
            for k in 1..=used.min(d) {
                let next = v[k - 1].mul(f, l);
                v.push(next);
            }
            pows.push(v);
        }
        let mut acc: HashMap<Exps, u64> = HashMap::new();
        for (e, &c) in &self.terms {
            let mut t = MPoly::constant(m, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(f, &pows[i][k as usize]);
                }
            }
            for (e2, v) in t.terms {
                let slot = acc.entry(e2).or_insert(0);
                *slot = f.add(*slot, v);
            }
        }
        MPoly {
            nvars: m,
            degree: self.degree,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    /// Coefficient vector in the given monomial basis.
    pub fn to_dense(&self, basis: &MonomialBasis) -> Vec<u64> {
        assert_eq!(basis.nvars, self.nvars);
        let mut v = vec![0; basis.len()];
        if self.is_zero() {
            return v;
        }
        assert_eq!(basis.degree, self.degree as usize);
        for (e, &c) in &self.terms {
            v[basis.index_of_packed(pack(e)).unwrap()] = c;
        }
        v
    }

    pub fn from_dense(basis: &MonomialBasis, v: &[u64]) -> MPoly {
        assert_eq!(v.len(), basis.len());
        MPoly {
            nvars: basis.nvars,
            degree: basis.degree as u32,
            terms: basis
                .exps
                .iter()
                .zip(v)
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    /// Leading coefficient in graded lex order, if any.
    pub fn leading_coeff(&self) -> Option<u64> {
        self.terms.iter().next_back().map(|(_, &c)| c)
    }

    /// Scale so that the leading coefficient is 1.
    pub fn normalized(&self, f: &FieldCtx) -> MPoly {
        match self.leading_coeff() {
            Some(c) => self.scale(f, f.inv(c)),
            None => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_restriction() {
        let f = FieldCtx::new(101).unwrap();
        let w0 = MPoly::var(10, 0);
        let sq = w0.mul(&f, &w0);
        let mut pt = vec![0; 10];
        pt[0] = 2;
        assert_eq!(sq.evaluate(&f, &pt), 4);
        assert_eq!(MPoly::zero(10, 2).evaluate(&f, &pt), 0);

        // w0*w1 with both new variables sent to w0
        let w1 = MPoly::var(2, 1);
        let prod = MPoly::var(2, 0).mul(&f, &w1);
        let emb = FqMatrix::from_rows(&[vec![1], vec![1]]);
        let r = prod.restrict(&f, &emb);
        assert_eq!(r.coeff(&[2]), 1);
    }

    #[test]
    fn restriction_commutes_with_evaluation() {
        let f = FieldCtx::new(101).unwrap();
        let g = MPoly::linear(&[1, 2, 3])
            .pow(&f, 3)
            .add(&f, &MPoly::monomial(vec![1, 1, 1], 7));
        let emb = FqMatrix::from_rows(&[vec![1, 4], vec![5, 0], vec![2, 9]]);
        let r = g.restrict(&f, &emb);
        let y = [3u64, 8];
        let x = emb.mul_vec(&f, &y);
        assert_eq!(r.evaluate(&f, &y), g.evaluate(&f, &x));
    }

    #[test]
    fn serde_round_trip() {
        let f = FieldCtx::new(101).unwrap();
        let g = MPoly::linear(&[1, 0, 3]).pow(&f, 2);
        let s = serde_json::to_string(&g).unwrap();
        let back: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
