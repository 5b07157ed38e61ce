//! Integer intersection numbers: the Chow ring of the projective bundle
//! `P(F^∨)` over the K3 surface, the ring of `P^3`, and the Beauville–Bogomolov
//! lattice of the Hilbert square.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `c_2(F)`.
pub const C2_F: i64 = 9;
/// `h^2` on the surface, `2g - 2` for genus 16.
pub const H_SQUARED: i64 = 30;

/// Class on the basis `{1; H, h; hH, p; pH}` where `h` is pulled back from the
/// surface, `p` is the class of a fiber and `pH` is the point class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PFClass(pub [i64; 6]);

const ONE: usize = 0;
const BIG_H: usize = 1;
const SMALL_H: usize = 2;
const HH: usize = 3;
const P: usize = 4;
const PH: usize = 5;
const DEGREES: [usize; 6] = [0, 1, 1, 2, 2, 3];

impl PFClass {
    pub fn zero() -> Self {
        PFClass([0; 6])
    }

    pub fn basis(i: usize) -> Self {
        let mut c = [0; 6];
        c[i] = 1;
        PFClass(c)
    }

    pub fn one() -> Self {
        Self::basis(ONE)
    }
    pub fn big_h() -> Self {
        Self::basis(BIG_H)
    }
    pub fn small_h() -> Self {
        Self::basis(SMALL_H)
    }
    pub fn h_big_h() -> Self {
        Self::basis(HH)
    }
    pub fn p() -> Self {
        Self::basis(P)
    }
    pub fn point() -> Self {
        Self::basis(PH)
    }

    pub fn scale(self, k: i64) -> Self {
        PFClass(self.0.map(|x| k * x))
    }

    /// Degree of the top-dimensional part.
    pub fn degree(&self) -> i64 {
        self.0[PH]
    }

    /// Part of codimension `k`.
    pub fn graded(&self, k: usize) -> Self {
        let mut c = [0; 6];
        for i in 0..6 {
            if DEGREES[i] == k {
                c[i] = self.0[i];
            }
        }
        PFClass(c)
    }

    pub fn pow(self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self)
    }

    /// Inverse of a class with constant term 1, by the finite geometric series.
    pub fn inverse_unipotent(self) -> Self {
        assert_eq!(self.0[ONE], 1, "constant term must be 1");
        let n = self - Self::one();
        let mut acc = Self::one();
        let mut term = Self::one();
        for _ in 0..3 {
            term = -(term * n);
            acc = acc + term;
        }
        acc
    }

    fn basis_product(i: usize, j: usize) -> Self {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == ONE {
            return Self::basis(j);
        }
        if DEGREES[i] + DEGREES[j] > 3 {
            return Self::zero();
        }
        let mut c = [0; 6];
        match (i, j) {
            // H^2 = hH - c2 p
            (BIG_H, BIG_H) => {
                c[HH] = 1;
                c[P] = -C2_F;
            }
            (BIG_H, SMALL_H) => c[HH] = 1,
            (SMALL_H, SMALL_H) => c[P] = H_SQUARED,
            // H·hH = h·H^2 = h^2 H
            (BIG_H, HH) => c[PH] = H_SQUARED,
            (BIG_H, P) => c[PH] = 1,
            (SMALL_H, HH) => c[PH] = H_SQUARED,
            (SMALL_H, P) => {}
            _ => unreachable!(),
        }
        PFClass(c)
    }
}

impl Add for PFClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(o.0) {
            *x += y;
        }
        PFClass(c)
    }
}

impl Sub for PFClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for PFClass {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Mul for PFClass {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut acc = Self::zero();
        for i in 0..6 {
            if self.0[i] == 0 {
                continue;
            }
            for j in 0..6 {
                if o.0[j] != 0 {
                    acc = acc + Self::basis_product(i, j).scale(self.0[i] * o.0[j]);
                }
            }
        }
        acc
    }
}

/// Segre class of the normal bundle and the residual degree of the cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreReport {
    pub segre: PFClass,
    /// Coefficients `(H, h)`, `(hH, p)`, `pH`.
    pub degree1: (i64, i64),
    pub degree2: (i64, i64),
    pub degree3: i64,
    pub top_of_product: i64,
    pub cover_degree: i64,
}

impl SegreReport {
    pub fn matches(&self) -> bool {
        self.degree1 == (-8, -1)
            && self.degree2 == (45, -291)
            && self.degree3 == -4152
            && self.top_of_product == 510
            && self.cover_degree == 2
    }
}

/// `s(N) = (1 + 24p)(1 + 2H - h)(1 + H)^{-10}`, and the excess contribution
/// `∫ s(N)(1 + 2H)^9` subtracted from `2^9`.
pub fn segre_normal_check() -> SegreReport {
    let one = PFClass::one();
    let big = PFClass::big_h();
    let small = PFClass::small_h();
    let s = (one + PFClass::p().scale(24))
        * (one + big.scale(2) - small)
        * (one + big).pow(10).inverse_unipotent();
    let top = (s * (one + big.scale(2)).pow(9)).degree();
    SegreReport {
        segre: s,
        degree1: (s.0[BIG_H], s.0[SMALL_H]),
        degree2: (s.0[HH], s.0[P]),
        degree3: s.0[PH],
        top_of_product: top,
        cover_degree: (1 << 9) - top,
    }
}

/// `H^3`, the degree of the image threefold.
pub fn degree_x() -> i64 {
    PFClass::big_h().pow(3).degree()
}

/// Truncated power series in one variable modulo `x^4`, the ring of `P^3`.
fn p3_mul(a: &[i64; 4], b: &[i64; 4]) -> [i64; 4] {
    let mut c = [0; 4];
    for i in 0..4 {
        for j in 0..4 - i {
            c[i + j] += a[i] * b[j];
        }
    }
    c
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Total Chern class of the rank-5 bundle `T` on `P^3` with
/// `0 -> O(-3) -> O(-1)^8 -> ...`, i.e. `(1 - 3x)(1 - x)^{-8}`.
pub fn chern_t() -> [i64; 4] {
    let mut inv = [0; 4];
    for (k, c) in inv.iter_mut().enumerate() {
        *c = binomial(7 + k as i64, k as i64);
    }
    p3_mul(&[1, -3, 0, 0], &inv)
}

/// Classes `a L + b δ` in the Néron–Severi lattice of the Hilbert square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKClass {
    pub l: i64,
    pub delta: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HKLattice {
    pub q_l: i64,
    pub q_delta: i64,
    pub fujiki: i64,
}

impl Default for HKLattice {
    fn default() -> Self {
        HKLattice {
            q_l: 30,
            q_delta: -2,
            fujiki: 3,
        }
    }
}

impl HKLattice {
    pub fn q(&self, a: HKClass, b: HKClass) -> i64 {
        a.l * b.l * self.q_l + a.delta * b.delta * self.q_delta
    }

    /// `D^4 = c q(D)^2`.
    pub fn fourth_power(&self, d: HKClass) -> i64 {
        self.fujiki * self.q(d, d).pow(2)
    }

    /// `D_1 · D_2^3 = c q(D_1, D_2) q(D_2)`.
    pub fn one_three(&self, d1: HKClass, d2: HKClass) -> i64 {
        self.fujiki * self.q(d1, d2) * self.q(d2, d2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub q_c1: i64,
    pub c1_fourth: i64,
    /// `(3/4) c_1^4`, the bound for a rank-3 quotient.
    pub bound: i64,
    pub l_c1_cubed: i64,
    pub delta_c1_cubed: i64,
    /// `(α, least β)` for each admissible `α`.
    pub cases: Vec<(i64, i64)>,
    pub destabilizing_exists: bool,
}

impl StabilityReport {
    pub fn matches(&self) -> bool {
        self.q_c1 == 22
            && self.c1_fourth == 1452
            && self.bound == 1089
            && self.l_c1_cubed == 3960
            && self.delta_c1_cubed == 924
            && self.cases == vec![(1, 4), (2, 8)]
            && !self.destabilizing_exists
    }
}

/// Slope of the movable cone boundary as a fraction `β/α`.
pub const MOVABLE_SLOPE: (i64, i64) = (15, 4);

/// Case analysis for a quotient with `c_1 = α L - β δ`: the slope bound
/// `α·(L c^3) - β·(δ c^3) <= (3/4) c^4` together with `β/α <= 15/4`.
pub fn stability_check() -> StabilityReport {
    let lat = HKLattice::default();
    let c1 = HKClass { l: 2, delta: -7 };
    let l = HKClass { l: 1, delta: 0 };
    let d = HKClass { l: 0, delta: 1 };
    let c4 = lat.fourth_power(c1);
    assert_eq!(c4 % 4, 0);
    let bound = 3 * c4 / 4;
    let lc = lat.one_three(l, c1);
    // c_1(B) = αL - βδ pairs with c^3 as α·lc - β·dc, with dc = δ·c^3
    let dc = lat.one_three(d, c1);
    let (sn, sd) = MOVABLE_SLOPE;
    let mut cases = Vec::new();
    let mut destab = false;
    // with β <= (sn/sd) α the slope inequality gives α (lc·sd - dc·sn) <= bound·sd
    let per_alpha = lc * sd - dc * sn;
    assert!(per_alpha > 0);
    let alpha_max = bound * sd / per_alpha;
    for alpha in 1..=alpha_max {
        // least integer β with α·lc - β·dc <= bound
        let num = alpha * lc - bound;
        let beta = if num <= 0 { 0 } else { (num + dc - 1) / dc };
        cases.push((alpha, beta));
        if beta * sd <= sn * alpha {
            destab = true;
        }
    }
    StabilityReport {
        q_c1: lat.q(c1, c1),
        c1_fourth: c4,
        bound,
        l_c1_cubed: lc,
        delta_c1_cubed: dc,
        cases,
        destabilizing_exists: destab,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_is_associative_and_commutative() {
        for i in 0..6 {
            for j in 0..6 {
                let (a, b) = (PFClass::basis(i), PFClass::basis(j));
                assert_eq!(a * b, b * a);
                for k in 0..6 {
                    let c = PFClass::basis(k);
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn segre_class_pieces() {
        let r = segre_normal_check();
        assert_eq!(r.degree1, (-8, -1));
        assert_eq!(r.degree2, (45, -291));
        assert_eq!(r.degree3, -4152);
        assert_eq!(r.top_of_product, 510);
        assert_eq!(r.cover_degree, 2);
    }

    #[test]
    fn degree_and_chern_numbers() {
        assert_eq!(degree_x(), 21);
        assert_eq!((PFClass::small_h() * PFClass::big_h().pow(2)).degree(), 30);
        assert_eq!(chern_t(), [1, 5, 12, 12]);
    }

    #[test]
    fn inverse_is_inverse() {
        let x = PFClass::one() + PFClass::big_h().scale(3) - PFClass::p();
        assert_eq!(x * x.inverse_unipotent(), PFClass::one());
    }

    #[test]
    fn lattice_numbers() {
        let r = stability_check();
        assert!(r.matches(), "{r:?}");
    }
}
