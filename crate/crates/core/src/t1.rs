//! The trivector `t1 ∈ ∧^3 V10^∨`, reconstructed from five rulings of `X`:
//! the quadrics vanishing on the span of two rulings give ten 6-spaces
//! `K_ij`, their pairwise intersections give 45 lines, and `t1` is the
//! unique trivector for which all those lines lie in its congruence.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{not_generic, Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::MonomialBasis;
use crate::mukai::MukaiModel;
use crate::multilinear::{wedge2, wedge2_pairs, wedge3_triples, Trivector};
use crate::xquad::{
    quadric_of_gram, restrict_gram, ruling_through, sample_x_points, QuadricSystem, Ruling, XPoint,
};

/// Number of points and rulings used.
pub const T1_POINTS: usize = 5;

/// Quadrics of `V10` (in `V10` coordinates) vanishing on the span of two
/// rulings.
pub fn k_space(f: &FieldCtx, v10: &QuadricSystem, a: &Ruling, b: &Ruling) -> Result<Subspace> {
    let span = a.span.sum(f, &b.span);
    if span.dim() != 4 {
        return Err(Error::NonGenericPoint("rulings are not skew".into()));
    }
    let e = FqMatrix::from_cols(&span.vectors());
    let b4 = MonomialBasis::new(4, 2);
    let rows: Vec<Vec<u64>> = v10
        .grams(f)
        .iter()
        .map(|g| quadric_of_gram(f, &b4, &restrict_gram(f, g, &e)))
        .collect();
    Ok(FqMatrix::from_rows(&rows).left_kernel(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T1Run {
    pub points: Vec<XPoint>,
    pub rulings: Vec<Ruling>,
    /// Index pairs of the rulings, in the order of `k_spaces`.
    pub pairs: Vec<(usize, usize)>,
    pub k_spaces: Vec<Subspace>,
    /// `K_ab ∩ K_cd` for the pairs of pairs, in lexicographic order.
    pub deltas: Vec<Subspace>,
    pub v35: Subspace,
    pub n10: Subspace,
    pub kernel_dim: usize,
    pub flattening_rank: usize,
    pub t1: Trivector,
}

/// Steps (iii) through (vi) for given points and rulings.
pub fn run_algorithm(
    f: &FieldCtx,
    v10: &QuadricSystem,
    points: Vec<XPoint>,
    rulings: Vec<Ruling>,
) -> Result<T1Run> {
    let n = rulings.len();
    let pairs = wedge2_pairs(n);
    let mut ks = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let k = k_space(f, v10, &rulings[i], &rulings[j])?;
        if k.dim() != 6 {
            return Err(not_generic("k_dim"));
        }
        ks.push(k);
    }
    let mut deltas = Vec::new();
    let mut bivectors = Vec::new();
    for (x, y) in wedge2_pairs(ks.len()) {
        let d = ks[x].intersect(f, &ks[y]);
        if d.dim() != 2 {
            return Err(not_generic("delta_dim"));
        }
        let v = d.vectors();
        bivectors.push(wedge2(f, &v[0], &v[1]));
        deltas.push(d);
    }
    let v35 = Subspace::span(f, 45, &bivectors);
    if v35.dim() != 35 {
        return Err(not_generic("v35_dim"));
    }
    let n10 = v35.annihilator(f);
    if n10.dim() != 10 {
        return Err(not_generic("n10_dim"));
    }
    // t with every contraction t(e_a, -, -) orthogonal to every δ bivector
    let triples = wedge3_triples(10);
    let p2 = wedge2_pairs(10);
    let mut m = FqMatrix::zeros(10 * bivectors.len(), triples.len());
    for (c, &(i, j, k)) in triples.iter().enumerate() {
        // coefficient t_ijk appears in t(e_i, e_j, e_k), t(e_j, e_k, e_i), t(e_k, e_i, e_j)
        for &(a, x, y, sign) in &[(i, j, k, false), (j, i, k, true), (k, i, j, false)] {
            let col = p2.iter().position(|&q| q == (x, y)).unwrap();
            for (r, bv) in bivectors.iter().enumerate() {
                let v = if sign { f.neg(bv[col]) } else { bv[col] };
                let row = a * bivectors.len() + r;
                m.set(row, c, f.add(m.get(row, c), v));
            }
        }
    }
    let ker = m.kernel(f);
    if ker.dim() != 1 {
        return Err(not_generic("t1_kernel_dim"));
    }
    let mut t1 = Trivector::from_coeffs(10, ker.vectors().remove(0), true);
    t1.normalize(f);
    let flat = t1.flattening(f);
    let flattening_rank = flat.rank(f);
    if flattening_rank != 10 || !n10.contains_space(f, &Subspace::from_rows(f, 45, flat)) {
        return Err(not_generic("t1_flattening"));
    }
    Ok(T1Run {
        points,
        rulings,
        pairs,
        k_spaces: ks,
        deltas,
        v35,
        n10,
        kernel_dim: ker.dim(),
        flattening_rank,
        t1,
    })
}

/// Draw rational points of `X` with pairwise skew rulings and run the
/// algorithm, resampling when a dimension check fails.
pub fn compute_t1(
    model: &MukaiModel,
    v10: &QuadricSystem,
    attempts: usize,
    rng: &mut impl Rng,
) -> Result<(T1Run, usize)> {
    let f = &model.f;
    let mut last = not_generic("t1_attempts");
    for attempt in 0..attempts {
        let (pts, rls) = skew_rulings(model, v10, T1_POINTS, &[], rng)?;
        match run_algorithm(f, v10, pts, rls) {
            Ok(run) => return Ok((run, attempt)),
            Err(e @ Error::SeedNotGeneric { .. }) | Err(e @ Error::NonGenericPoint(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `n` rational points of `X` whose rulings are pairwise skew and skew to
/// the rulings in `avoid`.
pub fn skew_rulings(
    model: &MukaiModel,
    v10: &QuadricSystem,
    n: usize,
    avoid: &[Ruling],
    rng: &mut impl Rng,
) -> Result<(Vec<XPoint>, Vec<Ruling>)> {
    let f = &model.f;
    let mut pts = Vec::new();
    let mut rls: Vec<Ruling> = Vec::new();
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > 50 * n {
            return Err(not_generic("skew_rulings"));
        }
        let (cand, _) = sample_x_points(model, v10, 1, 500, rng)?;
        let x = cand.into_iter().next().unwrap();
        let Ok(r) = ruling_through(f, v10, &x.coords) else {
            continue;
        };
        if rls
            .iter()
            .chain(avoid)
            .all(|o| o.span.sum(f, &r.span).dim() == 4)
        {
            pts.push(x);
            rls.push(r);
        }
    }
    Ok((pts, rls))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T1Verification {
    pub deltas_in_congruence: usize,
    pub k_spaces_null: usize,
    pub extra_k_spaces_null: usize,
    pub extra_k_spaces: usize,
}

impl T1Verification {
    pub fn passed(&self) -> bool {
        self.deltas_in_congruence == 45
            && self.k_spaces_null == 10
            && self.extra_k_spaces_null == self.extra_k_spaces
    }
}

/// Checks on a finished run: the δ lines lie in the congruence of `t1`,
/// `t1` vanishes on each `∧^3 K_ij`, and on the `K` spaces formed with one
/// more ruling.
pub fn verify_t1(
    model: &MukaiModel,
    v10: &QuadricSystem,
    run: &T1Run,
    rng: &mut impl Rng,
) -> Result<T1Verification> {
    let f = &model.f;
    let t1 = &run.t1;
    let deltas_in = run
        .deltas
        .iter()
        .filter(|d| {
            let v = d.vectors();
            t1.contract2(f, &v[0], &v[1]).iter().all(|&c| c == 0)
        })
        .count();
    let null = |k: &Subspace| {
        t1.restricted_values(f, &k.vectors())
            .iter()
            .all(|&c| c == 0)
    };
    let k_null = run.k_spaces.iter().filter(|k| null(k)).count();
    let (_, extra) = skew_rulings(model, v10, 1, &run.rulings, rng)?;
    let mut extra_null = 0;
    for r in &run.rulings {
        if null(&k_space(f, v10, r, &extra[0])?) {
            extra_null += 1;
        }
    }
    Ok(T1Verification {
        deltas_in_congruence: deltas_in,
        k_spaces_null: k_null,
        extra_k_spaces_null: extra_null,
        extra_k_spaces: run.rulings.len(),
    })
}
