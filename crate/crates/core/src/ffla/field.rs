//! Prime field `F_p` and its quadratic extension `F_{p^2} = F_p[x]/(x^2 - s)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound (exclusive) on accepted moduli.
pub const MAX_PRIME: u64 = 1 << 61;

/// Arithmetic context for `F_p`, `p > 3`.
///
/// Residues are plain `u64` values in `[0, p)`. The context is `Copy` and is
/// passed by value everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCtx {
    p: u64,
    /// Least quadratic non-residue; defines `F_{p^2}` as `F_p(sqrt(s))`.
    nonresidue: u64,
}

/// Element `a + b*sqrt(s)` of the quadratic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp2 {
    pub a: u64,
    pub b: u64,
}

impl Fp2 {
    pub const ZERO: Fp2 = Fp2 { a: 0, b: 0 };
    pub const ONE: Fp2 = Fp2 { a: 1, b: 0 };

    pub fn base(a: u64) -> Self {
        Fp2 { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_base(&self) -> bool {
        self.b == 0
    }
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let mut ctx = FieldCtx { p, nonresidue: 0 };
        let mut s = 2;
        while ctx.legendre(s) != -1 {
            s += 1;
        }
        ctx.nonresidue = s;
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    /// Number of products `(p-1)^2` that fit on top of a reduced value in a
    /// `u64` accumulator. Zero when a single product may overflow.
    pub fn lazy_capacity(&self) -> usize {
        let m = (self.p - 1) as u128;
        let cap = (u64::MAX as u128 - m) / (m * m);
        cap.min(1 << 20) as usize
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p < (1 << 32) {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    /// `a + b*c`.
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        if self.p < (1 << 31) {
            (a + b * c) % self.p
        } else {
            ((a as u128 + b as u128 * c as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on i128
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.p as i128) as u64
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.p as i128) as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn to_i64(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(1..self.p)
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.random(rng)).collect()
    }

    /// Random nonzero vector.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        loop {
            let v = self.random_vec(rng, n);
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    /// Legendre symbol: 1, -1, or 0.
    pub fn legendre(&self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root in `F_p` (Tonelli-Shanks), `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.nonresidue;
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Normalize a projective point so that its first nonzero entry is 1.
    pub fn normalize(&self, v: &mut [u64]) -> bool {
        if let Some(&lead) = v.iter().find(|&&x| x != 0) {
            let inv = self.inv(lead);
            for x in v.iter_mut() {
                *x = self.mul(*x, inv);
            }
            true
        } else {
            false
        }
    }

    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        let cap = self.lazy_capacity();
        if cap >= a.len() {
            let s: u64 = a.iter().zip(b).map(|(&x, &y)| x * y).sum();
            s % self.p
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.mul_add(acc, x, y))
        }
    }

    // ---- F_{p^2} ----

    pub fn add2(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            a: self.add(x.a, y.a),
            b: self.add(x.b, y.b),
        }
    }

    pub fn sub2(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            a: self.sub(x.a, y.a),
            b: self.sub(x.b, y.b),
        }
    }

    pub fn neg2(&self, x: Fp2) -> Fp2 {
        Fp2 {
            a: self.neg(x.a),
            b: self.neg(x.b),
        }
    }

    pub fn mul2(&self, x: Fp2, y: Fp2) -> Fp2 {
        let ac = self.mul(x.a, y.a);
        let bd = self.mul(x.b, y.b);
        Fp2 {
            a: self.add(ac, self.mul(bd, self.nonresidue)),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.a)),
        }
    }

    pub fn scale2(&self, x: Fp2, c: u64) -> Fp2 {
        Fp2 {
            a: self.mul(x.a, c),
            b: self.mul(x.b, c),
        }
    }

    pub fn conj2(&self, x: Fp2) -> Fp2 {
        Fp2 {
            a: x.a,
            b: self.neg(x.b),
        }
    }

    /// Norm `a^2 - s b^2` into `F_p`.
    pub fn norm2(&self, x: Fp2) -> u64 {
        self.sub(
            self.mul(x.a, x.a),
            self.mul(self.nonresidue, self.mul(x.b, x.b)),
        )
    }

    pub fn inv2(&self, x: Fp2) -> Fp2 {
        let n = self.inv(self.norm2(x));
        self.scale2(self.conj2(x), n)
    }

    /// Square root of a base-field element inside `F_{p^2}` (always exists).
    pub fn sqrt_in_ext(&self, a: u64) -> Fp2 {
        match self.sqrt(a) {
            Some(r) => Fp2::base(r),
            None => {
                // a = s * (a/s), a/s is a residue
                let r = self
                    .sqrt(self.div(a, self.nonresidue))
                    .expect("quotient of non-residues is a residue");
                Fp2 { a: 0, b: r }
            }
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite() {
        assert!(FieldCtx::new(2).is_err());
        assert!(FieldCtx::new(3).is_err());
        assert!(FieldCtx::new(100).is_err());
        assert!(FieldCtx::new(101).is_ok());
        assert!(FieldCtx::new((1 << 61) - 1).is_ok());
        assert!(FieldCtx::new(1 << 61).is_err());
    }

    #[test]
    fn inverse_and_sqrt() {
        let f = FieldCtx::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            let sq = f.mul(a, a);
            let r = f.sqrt(sq).unwrap();
            assert_eq!(f.mul(r, r), sq);
        }
        assert_eq!(f.nonresidue(), 2);
    }

    #[test]
    fn extension_field_sqrt_of_nonresidue() {
        let f = FieldCtx::new(101).unwrap();
        for a in 1..101u64 {
            let r = f.sqrt_in_ext(a);
            assert_eq!(f.mul2(r, r), Fp2::base(a));
        }
        let x = Fp2 { a: 3, b: 7 };
        assert_eq!(f.mul2(x, f.inv2(x)), Fp2::ONE);
    }

    #[test]
    fn big_prime_arithmetic() {
        let f = FieldCtx::new((1 << 61) - 1).unwrap();
        let a = 1234567890123456789;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.lazy_capacity(), 0);
    }
}
