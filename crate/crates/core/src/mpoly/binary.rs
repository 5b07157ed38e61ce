//! Univariate polynomials over `F_p` and binary forms with root finding over
//! `F_p` and `F_{p^2}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, Fp2};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<u64>);

impl UPoly {
    pub fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn x() -> Self {
        UPoly(vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn eval(&self, f: &FieldCtx, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
    }

    pub fn sub(&self, f: &FieldCtx, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new(
            (0..n)
                .map(|i| f.sub(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn mul(&self, f: &FieldCtx, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly(vec![]);
        }
        let mut r = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                r[i + j] = f.mul_add(r[i + j], a, b);
            }
        }
        UPoly::new(r)
    }

    pub fn monic(&self, f: &FieldCtx) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(self.lead());
        UPoly(self.0.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn divrem(&self, f: &FieldCtx, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (UPoly(vec![]), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c != 0 {
                let m = f.neg(c);
                for (j, &dj) in d.0.iter().enumerate() {
                    r[i + j] = f.mul_add(r[i + j], m, dj);
                }
            }
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, f: &FieldCtx, d: &UPoly) -> UPoly {
        self.divrem(f, d).1
    }

    pub fn gcd(&self, f: &FieldCtx, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &FieldCtx) -> UPoly {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, i as u64 % f.p()))
                .collect(),
        )
    }

    /// `base^e mod m`.
    pub fn powmod(f: &FieldCtx, base: &UPoly, mut e: u128, m: &UPoly) -> UPoly {
        let mut r = UPoly(vec![1]).rem(f, m);
        let mut b = base.rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b).rem(f, m);
            }
            b = b.mul(f, &b).rem(f, m);
            e >>= 1;
        }
        r
    }
}

/// Binary form `sum_i c_i s^(d-i) t^i` of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryForm {
    pub coeffs: Vec<u64>,
}

/// Root of a binary form as a point `(s : t)` of `P^1` over `F_{p^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjRoot {
    pub s: Fp2,
    pub t: Fp2,
}

impl ProjRoot {
    pub fn is_rational(&self) -> bool {
        self.s.is_base() && self.t.is_base()
    }
}

/// Roots with multiplicity, plus the number of roots defined only over
/// extensions of degree greater than 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<(ProjRoot, usize)>,
    pub residual: usize,
}

impl RootReport {
    pub fn total(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum::<usize>() + self.residual
    }

    pub fn rational(&self) -> Vec<(u64, u64)> {
        self.roots
            .iter()
            .filter(|(r, _)| r.is_rational())
            .map(|(r, _)| (r.s.a, r.t.a))
            .collect()
    }
}

impl BinaryForm {
    pub fn new(coeffs: Vec<u64>) -> Self {
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, f: &FieldCtx, s: u64, t: u64) -> u64 {
        let d = self.degree();
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let term = f.mul(c, f.mul(f.pow(s, (d - i) as u64), f.pow(t, i as u64)));
            acc = f.add(acc, term);
        }
        acc
    }

    /// Fit a degree-`d` form through values at `d+1` points `(s_k : t_k)`
    /// with pairwise distinct ratios.
    pub fn interpolate(f: &FieldCtx, d: usize, pts: &[(u64, u64)], vals: &[u64]) -> Result<Self> {
        use crate::ffla::{FqMatrix, Solve};
        assert!(pts.len() > d && pts.len() == vals.len());
        let rows: Vec<Vec<u64>> = pts
            .iter()
            .map(|&(s, t)| {
                (0..=d)
                    .map(|i| f.mul(f.pow(s, (d - i) as u64), f.pow(t, i as u64)))
                    .collect()
            })
            .collect();
        match FqMatrix::from_rows(&rows).solve(f, vals) {
            Solve::Consistent(c) => Ok(BinaryForm::new(c)),
            Solve::Inconsistent => Err(Error::Inconsistent("binary form fit".into())),
        }
    }

    /// Power of `t` dividing the form and the dehomogenized cofactor
    /// `u(x) = f(x, 1) / ...` whose roots `x` give the points `(x : 1)`.
    fn split_t(&self) -> (usize, UPoly) {
        let d = self.degree();
        let k = self.coeffs.iter().position(|&c| c != 0).unwrap_or(d + 1);
        // f(x,1) = sum c_i x^(d-i)
        let u: Vec<u64> = (0..=d).map(|j| self.coeffs[d - j]).collect();
        (k, UPoly::new(u))
    }

    /// Greatest common divisor, normalized, of the same nominal degree
    /// as its actual degree.
    pub fn gcd(&self, f: &FieldCtx, o: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (k1, u1) = self.split_t();
        let (k2, u2) = o.split_t();
        let k = k1.min(k2);
        let g = u1.gcd(f, &u2);
        let dg = g.degree().unwrap_or(0);
        let d = k + dg;
        // rehomogenize: t^k * s^(dg-j) * x^j coefficient ... c_i for s^(d-i) t^i
        let mut c = vec![0; d + 1];
        for (j, &gj) in g.0.iter().enumerate() {
            // gj * s^j t^(dg-j) * t^k  -> index i = dg - j + k
            c[dg - j + k] = gj;
        }
        BinaryForm::new(c)
    }

    /// Roots over `F_p` and `F_{p^2}` with multiplicity.
    pub fn roots<R: Rng + ?Sized>(&self, f: &FieldCtx, rng: &mut R) -> Result<RootReport> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (k, u) = self.split_t();
        let mut roots = Vec::new();
        if k > 0 {
            roots.push((
                ProjRoot {
                    s: Fp2::ONE,
                    t: Fp2::ZERO,
                },
                k,
            ));
        }
        let (mut rest, found) = univariate_roots(f, &u, rng);
        for (x, m) in found {
            roots.push((ProjRoot { s: x, t: Fp2::ONE }, m));
        }
        rest = rest.min(self.degree());
        roots.sort();
        Ok(RootReport {
            roots,
            residual: rest,
        })
    }
}

/// Roots of `u` in `F_p` and `F_{p^2}` with multiplicity; returns the count of
/// remaining roots (in higher extensions) and the list.
fn univariate_roots<R: Rng + ?Sized>(
    f: &FieldCtx,
    u: &UPoly,
    rng: &mut R,
) -> (usize, Vec<(Fp2, usize)>) {
    let Some(deg) = u.degree() else {
        return (0, vec![]);
    };
    if deg == 0 {
        return (0, vec![]);
    }
    let p = f.p() as u128;
    let um = u.monic(f);
    let x = UPoly::x();
    let mut out: Vec<(Fp2, usize)> = Vec::new();
    let mut remaining = um.clone();

    // rational roots: gcd with x^p - x
    let xp = UPoly::powmod(f, &x, p, &um);
    let g1 = um.gcd(f, &xp.sub(f, &x));
    for r in split_linear(f, &g1, rng) {
        let lin = UPoly(vec![f.neg(r), 1]);
        let mut m = 0;
        loop {
            let (q, rem) = remaining.divrem(f, &lin);
            if !rem.is_zero() {
                break;
            }
            remaining = q;
            m += 1;
        }
        out.push((Fp2::base(r), m));
    }

    // quadratic irreducible factors: gcd with x^(p^2) - x after removing
    // linear factors
    if remaining.degree().unwrap_or(0) >= 2 {
        let rm = remaining.monic(f);
        let xp = UPoly::powmod(f, &x, p, &rm);
        let xp2 = UPoly::powmod(f, &xp, p, &rm);
        let g2 = rm.gcd(f, &xp2.sub(f, &x));
        for q in split_quadratics(f, &g2, rng) {
            let mut m = 0;
            loop {
                let (qq, rem) = remaining.divrem(f, &q);
                if !rem.is_zero() {
                    break;
                }
                remaining = qq;
                m += 1;
            }
            // x^2 + b x + c
            let (c, b) = (q.0[0], q.0[1]);
            let disc = f.sub(f.mul(b, b), f.mul(4, c));
            let sq = f.sqrt_in_ext(disc);
            let half = f.inv(2);
            let mb = Fp2::base(f.neg(b));
            let r1 = f.scale2(f.add2(mb, sq), half);
            let r2 = f.scale2(f.sub2(mb, sq), half);
            out.push((r1, m));
            out.push((r2, m));
        }
    }
    (remaining.degree().unwrap_or(0), out)
}

/// Distinct roots of a product of distinct linear factors (equal-degree
/// splitting with random shifts).
fn split_linear<R: Rng + ?Sized>(f: &FieldCtx, g: &UPoly, rng: &mut R) -> Vec<u64> {
    match g.degree() {
        None | Some(0) => vec![],
        Some(1) => {
            let m = g.monic(f);
            vec![f.neg(m.0[0])]
        }
        Some(_) => {
            let e = (f.p() as u128 - 1) / 2;
            loop {
                let a = f.random(rng);
                let shift = UPoly(vec![a, 1]);
                let h = UPoly::powmod(f, &shift, e, g).sub(f, &UPoly(vec![1]));
                let d = g.gcd(f, &h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let (q, _) = g.divrem(f, &d);
                    let mut r = split_linear(f, &d, rng);
                    r.extend(split_linear(f, &q.monic(f), rng));
                    r.sort();
                    return r;
                }
            }
        }
    }
}

/// Irreducible monic quadratic factors of a product of distinct ones.
fn split_quadratics<R: Rng + ?Sized>(f: &FieldCtx, g: &UPoly, rng: &mut R) -> Vec<UPoly> {
    let deg = g.degree().unwrap_or(0);
    if deg < 2 {
        return vec![];
    }
    if deg == 2 {
        return vec![g.monic(f)];
    }
    let p = f.p() as u128;
    let e = (p * p - 1) / 2;
    loop {
        let r = UPoly::new(vec![f.random(rng), f.random(rng), f.random(rng)]).rem(f, g);
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let h = UPoly::powmod(f, &r, e, g).sub(f, &UPoly(vec![1]));
        let d = g.gcd(f, &h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < deg {
            let (q, _) = g.divrem(f, &d);
            let mut out = split_quadratics(f, &d, rng);
            out.extend(split_quadratics(f, &q.monic(f), rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_roots() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // s^2 - t^2 -> (1:1), (100:1)
        let r = BinaryForm::new(vec![1, 0, 100])
            .roots(&f, &mut rng)
            .unwrap();
        assert_eq!(r.rational(), vec![(1, 1), (100, 1)]);
        // s^2 -> (0:1) double
        let r = BinaryForm::new(vec![1, 0, 0]).roots(&f, &mut rng).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].1, 2);
        assert_eq!(r.roots[0].0.s, Fp2::ZERO);
        // s^2 - 2 t^2: 2 is a non-residue mod 101 -> conjugate pair
        let r = BinaryForm::new(vec![1, 0, 99]).roots(&f, &mut rng).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots.iter().all(|(x, _)| !x.is_rational()));
        assert_eq!(r.total(), 2);
        assert!(BinaryForm::new(vec![0, 0]).roots(&f, &mut rng).is_err());
    }

    #[test]
    fn irreducible_cubic_is_residual() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // find an irreducible cubic x^3 + x + c by brute force
        let c = (1..101)
            .find(|&c| (0..101).all(|x| (x * x * x + x + c) % 101 != 0))
            .unwrap();
        let r = BinaryForm::new(vec![1, 0, 1, c])
            .roots(&f, &mut rng)
            .unwrap();
        assert_eq!(r.residual, 3);
        assert!(r.roots.is_empty());
    }

    #[test]
    fn gcd_keeps_common_factor_at_infinity() {
        let f = FieldCtx::new(101).unwrap();
        // t * (s - t) and t * (s + t)
        let a = BinaryForm::new(vec![0, 1, 100]);
        let b = BinaryForm::new(vec![0, 1, 1]);
        let g = a.gcd(&f, &b);
        assert_eq!(g.degree(), 1);
        assert_eq!(g.eval(&f, 1, 0), 0);
    }
}
