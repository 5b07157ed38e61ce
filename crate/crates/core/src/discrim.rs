//! The symmetric family `m_γ` over `P(V10)`, its discriminant `D_γ`, the
//! rank loci of `m_γ` and of `s'_γ`, all measured on random `P^3` slices.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::{interpolate_many, MPoly, Macaulay, Plateau};
use crate::multilinear::wedge2_pairs;
use crate::syzygy::SyzygySpace;
use crate::xquad::{random_member, QuadricSystem};

/// Gram matrices of the fixed basis of `V10`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramFamily {
    pub grams: Vec<FqMatrix>,
}

impl GramFamily {
    pub fn new(f: &FieldCtx, v10: &QuadricSystem) -> Self {
        GramFamily {
            grams: v10.grams(f),
        }
    }

    /// `Σ u_a G_a`.
    pub fn at(&self, f: &FieldCtx, u: &[u64]) -> FqMatrix {
        let n = self.grams[0].rows;
        let mut m = FqMatrix::zeros(n, n);
        for (g, &c) in self.grams.iter().zip(u) {
            if c == 0 {
                continue;
            }
            for (x, &y) in m.data.iter_mut().zip(&g.data) {
                *x = f.mul_add(*x, c, y);
            }
        }
        m
    }

    /// `det A(u)` and its gradient `(tr(adj A · G_a))_a`.
    pub fn disc_value_and_grad(&self, f: &FieldCtx, u: &[u64]) -> (u64, Vec<u64>) {
        let a = self.at(f, u);
        let adj = a.adjugate(f);
        let grad = self
            .grams
            .iter()
            .map(|g| trace_product(f, &adj, g))
            .collect();
        (a.det(f), grad)
    }
}

/// `tr(A B)` without forming the product.
pub fn trace_product(f: &FieldCtx, a: &FqMatrix, b: &FqMatrix) -> u64 {
    let n = a.rows;
    let mut s = 0;
    for i in 0..n {
        for k in 0..n {
            s = f.mul_add(s, a.get(i, k), b.get(k, i));
        }
    }
    s
}

/// Sample points for interpolating forms of degree `d` in four variables.
fn sample_points(f: &FieldCtx, d: usize, rng: &mut impl Rng) -> Vec<Vec<u64>> {
    let n = crate::mpoly::count_monomials(4, d) + 40;
    (0..n).map(|_| f.random_vec(rng, 4)).collect()
}

/// Fit forms of degree `d` on the slice to the value columns produced by
/// `eval` at sample points.
fn fit_on_slice(
    f: &FieldCtx,
    d: usize,
    ncols: usize,
    rng: &mut impl Rng,
    mut eval: impl FnMut(&[u64]) -> Vec<u64>,
) -> Result<Vec<MPoly>> {
    let pts = sample_points(f, d, rng);
    let mut cols = vec![Vec::with_capacity(pts.len()); ncols];
    for y in &pts {
        for (c, v) in cols.iter_mut().zip(eval(y)) {
            c.push(v);
        }
    }
    interpolate_many(f, 4, d, &pts, &cols)
}

/// The 55 distinct cofactors of `A(E y)`, i.e. the `9 x 9` minors up to
/// symmetry, as nonics on the slice.
pub fn fit1_generators(
    f: &FieldCtx,
    fam: &GramFamily,
    e: &FqMatrix,
    rng: &mut impl Rng,
) -> Result<Vec<MPoly>> {
    fit_on_slice(f, 9, 55, rng, |y| {
        let adj = fam.at(f, &e.mul_vec(f, y)).adjugate(f);
        let mut v = Vec::with_capacity(55);
        for i in 0..10 {
            for j in i..10 {
                v.push(adj.get(i, j));
            }
        }
        v
    })
}

/// The four partial derivatives of `det A(E y)` in `y`.
pub fn sing_generators(
    f: &FieldCtx,
    fam: &GramFamily,
    e: &FqMatrix,
    rng: &mut impl Rng,
) -> Result<Vec<MPoly>> {
    let dirs: Vec<FqMatrix> = (0..4).map(|j| fam.at(f, &e.col(j))).collect();
    fit_on_slice(f, 9, 4, rng, |y| {
        let adj = fam.at(f, &e.mul_vec(f, y)).adjugate(f);
        dirs.iter().map(|g| trace_product(f, &adj, g)).collect()
    })
}

/// Degree of a zero-dimensional slice locus and the fitted generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDegree {
    pub plateau: Plateau,
    pub generators: usize,
}

pub fn fit1_slice_degree(
    f: &FieldCtx,
    fam: &GramFamily,
    e: &FqMatrix,
    seed: u64,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<SliceDegree> {
    let gens = fit1_generators(f, fam, e, rng)?;
    Ok(SliceDegree {
        plateau: Macaulay::new(seed).zero_dim_degree(f, &gens, cap)?,
        generators: gens.len(),
    })
}

pub fn sing_slice_degree(
    f: &FieldCtx,
    fam: &GramFamily,
    e: &FqMatrix,
    seed: u64,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<SliceDegree> {
    let gens = sing_generators(f, fam, e, rng)?;
    Ok(SliceDegree {
        plateau: Macaulay::new(seed).zero_dim_degree(f, &gens, cap)?,
        generators: gens.len(),
    })
}

/// Interpolated partials re-evaluated against the adjugate formula at
/// fresh points of the slice.
pub fn check_partials(
    f: &FieldCtx,
    fam: &GramFamily,
    e: &FqMatrix,
    partials: &[MPoly],
    points: usize,
    rng: &mut impl Rng,
) -> bool {
    let dirs: Vec<FqMatrix> = (0..4).map(|j| fam.at(f, &e.col(j))).collect();
    (0..points).all(|_| {
        let y = f.random_vec(rng, 4);
        let adj = fam.at(f, &e.mul_vec(f, &y)).adjugate(f);
        dirs.iter()
            .zip(partials)
            .all(|(g, p)| trace_product(f, &adj, g) == p.evaluate(f, &y))
    })
}

/// A generic quadric singular at a point of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X60Report {
    pub gram_rank: usize,
    pub vertex_is_point: bool,
    pub det_zero: bool,
    pub gradient_zero: bool,
}

impl X60Report {
    pub fn passed(&self) -> bool {
        self.gram_rank == 9 && self.vertex_is_point && self.det_zero && self.gradient_zero
    }
}

/// `vertex` is the 4-dimensional space of quadrics singular at `x`, in
/// `V10` coordinates.
pub fn x60_membership(
    f: &FieldCtx,
    fam: &GramFamily,
    vertex: &Subspace,
    x: &[u64],
    rng: &mut impl Rng,
) -> Result<X60Report> {
    for _ in 0..10 {
        let u = random_member(f, vertex, rng);
        let a = fam.at(f, &u);
        let r = a.rank(f);
        if r != 9 {
            continue;
        }
        let ker = a.kernel(f);
        let (det, grad) = fam.disc_value_and_grad(f, &u);
        return Ok(X60Report {
            gram_rank: r,
            vertex_is_point: ker.dim() == 1 && ker.contains(f, x),
            det_zero: det == 0,
            gradient_zero: grad.iter().all(|&g| g == 0),
        });
    }
    Err(Error::NonGenericPoint(
        "no rank-9 member singular at the point".into(),
    ))
}

/// The 45 maximal minors of `s'_γ(E y)` (rows dropped in pairs).
pub fn fit0_generators(
    f: &FieldCtx,
    syz: &SyzygySpace,
    e: &FqMatrix,
    rng: &mut impl Rng,
) -> Result<Vec<MPoly>> {
    let pairs = wedge2_pairs(10);
    let cols: Vec<usize> = (0..8).collect();
    fit_on_slice(f, 8, 45, rng, |y| {
        let s = syz.s_prime_at(f, &e.mul_vec(f, y));
        pairs
            .iter()
            .map(|&(a, b)| {
                let rows: Vec<usize> = (0..10).filter(|&i| i != a && i != b).collect();
                s.minor(&rows, &cols).det(f)
            })
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fit0Report {
    pub slice: SliceDegree,
    /// Ranks of `s'_γ` at the supplied Peskine points of `t2`.
    pub peskine_ranks: Vec<usize>,
    pub generic_ranks_all_eight: bool,
    pub generic_samples: usize,
    /// Ranks of `s'_γ` at the rational points of each slice searched.
    pub slice_point_ranks: Vec<Vec<usize>>,
}

impl Fit0Report {
    pub fn rank_seven_found(&self) -> bool {
        self.slice_point_ranks.iter().flatten().any(|&r| r == 7)
    }

    pub fn passed(&self) -> bool {
        self.slice.plateau.degree == 120
            && !self.peskine_ranks.is_empty()
            && self.peskine_ranks.iter().all(|&r| r == 6)
            && self.generic_ranks_all_eight
            && self.rank_seven_found()
    }
}

/// Ranks of `s'_γ` at the rational points of `Fit^0 ∩ P(E)`.
fn slice_ranks(f: &FieldCtx, syz: &SyzygySpace, gens: &[MPoly], e: &FqMatrix) -> Vec<usize> {
    crate::trivector::p3_common_zeros(f, gens)
        .into_iter()
        .map(|y| syz.s_prime_at(f, &e.mul_vec(f, &y)).rank(f))
        .collect()
}

/// Degree on the slice `e`, ranks at Peskine and generic points, and a
/// search for rank-7 points over up to `max_slices` slices (the first is `e`).
#[allow(clippy::too_many_arguments)]
pub fn fit0_sprime_checks(
    f: &FieldCtx,
    syz: &SyzygySpace,
    peskine: &[Vec<u64>],
    e: &FqMatrix,
    seed: u64,
    cap: usize,
    max_slices: usize,
    rng: &mut impl Rng,
) -> Result<Fit0Report> {
    let gens = fit0_generators(f, syz, e, rng)?;
    let plateau = Macaulay::new(seed).zero_dim_degree(f, &gens, cap)?;
    let peskine_ranks = peskine
        .iter()
        .map(|q| syz.s_prime_at(f, q).rank(f))
        .collect();
    let generic_samples = 100;
    let generic =
        (0..generic_samples).all(|_| syz.s_prime_at(f, &f.random_point(rng, 10)).rank(f) == 8);
    let mut ranks = vec![slice_ranks(f, syz, &gens, e)];
    while ranks.len() < max_slices && !ranks.iter().flatten().any(|&r| r == 7) {
        let e2 = crate::trivector::random_slice(f, rng);
        let g2 = fit0_generators(f, syz, &e2, rng)?;
        ranks.push(slice_ranks(f, syz, &g2, &e2));
    }
    Ok(Fit0Report {
        slice: SliceDegree {
            plateau,
            generators: gens.len(),
        },
        peskine_ranks,
        generic_ranks_all_eight: generic,
        generic_samples,
        slice_point_ranks: ranks,
    })
}

/// Observations on the conjectural components of the singular locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Gram ranks of `m_γ` at sampled Peskine points of `t1`.
    pub t1_peskine_gram_ranks: Vec<usize>,
}

pub fn conjecture_probes(f: &FieldCtx, fam: &GramFamily, t1_points: &[Vec<u64>]) -> ProbeReport {
    ProbeReport {
        t1_peskine_gram_ranks: t1_points.iter().map(|u| fam.at(f, u).rank(f)).collect(),
    }
}
