//! Geometry of a single trivector on a 10-dimensional space: the Peskine
//! variety (contractions of rank at most 6), lines of the order-one
//! congruence, and the pairing between trivectors on dual spaces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::{
    interpolate_many, BinaryForm, MPoly, Macaulay, MonomialBasis, Plateau, RootReport,
};
use crate::multilinear::{wedge2_pairs, wedge3_triples, Trivector};
use crate::proj::ProjectivePoints;

/// Pfaffian of a skew matrix by expansion along the first row.
pub fn pfaffian(f: &FieldCtx, m: &FqMatrix) -> u64 {
    assert_eq!(m.rows, m.cols);
    if m.rows % 2 == 1 {
        return 0;
    }
    let idx: Vec<usize> = (0..m.rows).collect();
    pf_rec(f, m, &idx)
}

fn pf_rec(f: &FieldCtx, m: &FqMatrix, idx: &[usize]) -> u64 {
    if idx.is_empty() {
        return 1;
    }
    let i = idx[0];
    let mut acc = 0;
    for k in 1..idx.len() {
        let a = m.get(i, idx[k]);
        if a == 0 {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(r, _)| r + 1 != k)
            .map(|(_, &v)| v)
            .collect();
        let term = f.mul(a, pf_rec(f, m, &rest));
        acc = if k % 2 == 1 {
            f.add(acc, term)
        } else {
            f.sub(acc, term)
        };
    }
    acc
}

/// The 45 Pfaffians of the principal `8 x 8` submatrices of a `10 x 10`
/// skew matrix, indexed by the removed pair in lexicographic order.
pub fn sub_pfaffians(f: &FieldCtx, m: &FqMatrix) -> Vec<u64> {
    let n = m.rows;
    wedge2_pairs(n)
        .into_iter()
        .map(|(a, b)| {
            let keep: Vec<usize> = (0..n).filter(|&i| i != a && i != b).collect();
            pfaffian(f, &m.minor(&keep, &keep))
        })
        .collect()
}

/// A rational point of the Peskine variety with its 4-dimensional kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeskinePoint {
    pub coords: Vec<u64>,
    pub kernel4: Subspace,
}

/// Rank of `t(v, -, -)` and its kernel when the rank is at most 6.
pub fn peskine_test(f: &FieldCtx, t: &Trivector, v: &[u64]) -> (usize, Option<Subspace>) {
    let m = t.contract(f, v);
    let r = m.rank(f);
    if r <= 6 {
        (r, Some(m.kernel(f)))
    } else {
        (r, None)
    }
}

/// The unique congruence line through `q`: the kernel of `t(q, -, -)`.
pub fn congruence_line_through(f: &FieldCtx, t: &Trivector, q: &[u64]) -> Result<Subspace> {
    let m = t.contract(f, q);
    let r = m.rank(f);
    if r < 8 {
        return Err(Error::PointOnPeskine(r));
    }
    let k = m.kernel(f);
    debug_assert!(k.contains(f, q));
    Ok(k)
}

/// `t(V2, V2, -) = 0` for the plane spanned by `a`, `b`.
pub fn is_congruence_line(f: &FieldCtx, t: &Trivector, a: &[u64], b: &[u64]) -> bool {
    t.contract2(f, a, b).iter().all(|&c| c == 0)
}

/// Greatest common divisor of the 45 sub-Pfaffian quartics along a line,
/// with its roots over `F_p` and `F_{p^2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Secancy {
    pub form: BinaryForm,
    pub roots: RootReport,
}

impl Secancy {
    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    /// Rational roots as points `s a + t b`.
    pub fn rational_points(&self, f: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<Vec<u64>> {
        self.roots
            .rational()
            .into_iter()
            .map(|(s, t)| line_point(f, a, b, s, t))
            .collect()
    }
}

pub fn line_point(f: &FieldCtx, a: &[u64], b: &[u64], s: u64, t: u64) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f.add(f.mul(s, x), f.mul(t, y)))
        .collect()
}

/// Evaluation nodes for binary forms of degree at most 4.
const LINE_NODES: [(u64, u64); 6] = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (1, 4)];

pub fn line_secancy(
    f: &FieldCtx,
    t: &Trivector,
    a: &[u64],
    b: &[u64],
    rng: &mut impl Rng,
) -> Result<Secancy> {
    let vals: Vec<Vec<u64>> = LINE_NODES
        .iter()
        .map(|&(s, u)| sub_pfaffians(f, &t.contract(f, &line_point(f, a, b, s, u))))
        .collect();
    let mut g = BinaryForm::new(vec![0]);
    for k in 0..45 {
        let col: Vec<u64> = vals.iter().map(|v| v[k]).collect();
        let q = BinaryForm::interpolate(f, 4, &LINE_NODES[..5], &col[..5])?;
        if q.eval(f, LINE_NODES[5].0, LINE_NODES[5].1) != col[5] {
            return Err(Error::Internal(
                "sub-Pfaffian is not a quartic on the line".into(),
            ));
        }
        g = g.gcd(f, &q);
    }
    if g.is_zero() {
        return Err(Error::DegenerateLine);
    }
    let roots = g.roots(f, rng)?;
    Ok(Secancy { form: g, roots })
}

/// Random `P^3` inside `P^9`: a `10 x 4` matrix of full rank.
pub fn random_slice(f: &FieldCtx, rng: &mut impl Rng) -> FqMatrix {
    loop {
        let e = FqMatrix::from_cols(&(0..4).map(|_| f.random_vec(rng, 10)).collect::<Vec<_>>());
        if e.rank(f) == 4 {
            return e;
        }
    }
}

/// The 45 sub-Pfaffians of `t(E y, -, -)` as quartics in `y0..y3`.
pub fn slice_subpfaffians(
    f: &FieldCtx,
    t: &Trivector,
    e: &FqMatrix,
    rng: &mut impl Rng,
) -> Result<Vec<MPoly>> {
    let pts: Vec<Vec<u64>> = (0..60).map(|_| f.random_vec(rng, 4)).collect();
    let mut cols: Vec<Vec<u64>> = (0..45).map(|_| Vec::with_capacity(pts.len())).collect();
    for y in &pts {
        let v = sub_pfaffians(f, &t.contract(f, &e.mul_vec(f, y)));
        for (c, x) in cols.iter_mut().zip(v) {
            c.push(x);
        }
    }
    interpolate_many(f, 4, 4, &pts, &cols)
}

/// Degree of `Y^1_t ∩ P^3` for the slice `E`.
pub fn peskine_slice_degree(
    f: &FieldCtx,
    t: &Trivector,
    e: &FqMatrix,
    seed: u64,
    cap: usize,
    rng: &mut impl Rng,
) -> Result<Plateau> {
    let gens = slice_subpfaffians(f, t, e, rng)?;
    Macaulay::new(seed).zero_dim_degree(f, &gens, cap)
}

/// Rational zeros in `P^3(F_p)` of a set of forms, filtered by the first
/// nonzero echelon form before the rest are evaluated.
pub fn p3_common_zeros(f: &FieldCtx, forms: &[MPoly]) -> Vec<Vec<u64>> {
    let forms: Vec<&MPoly> = forms.iter().filter(|g| !g.is_zero()).collect();
    if forms.is_empty() {
        return ProjectivePoints::new(4, f.p()).collect();
    }
    let d = forms[0].degree as usize;
    let b = MonomialBasis::new(4, d);
    let span = Subspace::span(
        f,
        b.len(),
        &forms.iter().map(|g| g.to_dense(&b)).collect::<Vec<_>>(),
    );
    let dense = span.vectors();
    ProjectivePoints::new(4, f.p())
        .filter(|y| {
            let m = b.eval_all(f, y);
            dense.iter().all(|c| f.dot(c, &m) == 0)
        })
        .collect()
}

/// Rational Peskine points on a `P^3` slice, found by enumeration.
pub fn peskine_sample(
    f: &FieldCtx,
    t: &Trivector,
    e: &FqMatrix,
    max: usize,
    rng: &mut impl Rng,
) -> Result<Vec<PeskinePoint>> {
    let quartics = slice_subpfaffians(f, t, e, rng)?;
    let mut out = Vec::new();
    for y in p3_common_zeros(f, &quartics) {
        let mut v = e.mul_vec(f, &y);
        f.normalize(&mut v);
        if let (r, Some(k)) = peskine_test(f, t, &v) {
            if r == 6 {
                out.push(PeskinePoint {
                    coords: v,
                    kernel4: k,
                });
                if out.len() >= max {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// `b ∘ a`, the composite `V -> ∧^2 V^∨ -> V` of trivectors on dual spaces.
pub fn compose(f: &FieldCtx, b: &Trivector, a: &Trivector) -> FqMatrix {
    assert_ne!(a.dual, b.dual, "compose needs trivectors on dual spaces");
    let fb = b.flattening(f);
    let fa = a.flattening(f);
    fb.mul(f, &fa.transpose())
}

/// `{a : b ∘ a = 0}` inside the 120-dimensional space of dual trivectors.
pub fn perp_space(f: &FieldCtx, b: &Trivector) -> Subspace {
    let n = b.dim;
    let triples = wedge3_triples(n);
    let cols: Vec<Vec<u64>> = (0..triples.len())
        .map(|idx| {
            let mut e = Trivector::zero(n, !b.dual);
            e.coeffs[idx] = 1;
            compose(f, b, &e).data
        })
        .collect();
    FqMatrix::from_cols(&cols).kernel(f)
}

/// `t_h(v1, v2, v3) = t(h v1, v2, v3) + t(v1, h v2, v3) + t(v1, v2, h v3)`.
pub fn infinitesimal_action(f: &FieldCtx, t: &Trivector, h: &FqMatrix) -> Trivector {
    let n = t.dim;
    let coeffs = wedge3_triples(n)
        .into_iter()
        .map(|(i, j, k)| {
            let mut s = 0;
            for m in 0..n {
                s = f.mul_add(s, h.get(m, i), t.get(f, m, j, k));
                s = f.mul_add(s, h.get(m, j), t.get(f, i, m, k));
                s = f.mul_add(s, h.get(m, k), t.get(f, i, j, m));
            }
            s
        })
        .collect();
    Trivector::from_coeffs(n, coeffs, t.dual)
}

/// Tangent space to the `GL` orbit of `t`, as the image of all `t_h`.
pub fn orbit_tangent(f: &FieldCtx, t: &Trivector) -> Subspace {
    let n = t.dim;
    let mut vecs = Vec::with_capacity(n * n);
    for m in 0..n {
        for k in 0..n {
            let mut h = FqMatrix::zeros(n, n);
            h.set(m, k, 1);
            vecs.push(infinitesimal_action(f, t, &h).coeffs);
        }
    }
    Subspace::span(f, t.coeffs.len(), &vecs)
}

/// Dimension of the orbit tangent of `t` meeting `perp`, and whether `t`
/// itself lies in the intersection.
pub fn orbit_tangent_intersection(f: &FieldCtx, t: &Trivector, perp: &Subspace) -> (usize, bool) {
    let inter = orbit_tangent(f, t).intersect(f, perp);
    (inter.dim(), inter.contains(f, &t.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_trivector(f: &FieldCtx, rng: &mut ChaCha8Rng, dual: bool) -> Trivector {
        Trivector::from_coeffs(10, f.random_vec(rng, 120), dual)
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2usize, 4, 6, 8] {
            let mut m = FqMatrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = f.random(&mut rng);
                    m.set(i, j, v);
                    m.set(j, i, f.neg(v));
                }
            }
            let pf = pfaffian(&f, &m);
            assert_eq!(f.mul(pf, pf), m.det(&f));
        }
    }

    #[test]
    fn generic_contraction_has_rank_eight() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_trivector(&f, &mut rng, false);
        let v = f.random_point(&mut rng, 10);
        assert_eq!(peskine_test(&f, &t, &v).0, 8);
        let line = congruence_line_through(&f, &t, &v).unwrap();
        let b = line.vectors();
        assert!(is_congruence_line(&f, &t, &b[0], &b[1]));
        let s = line_secancy(&f, &t, &b[0], &b[1], &mut rng).unwrap();
        assert_eq!(s.degree(), 4);
        // a random line meets the codimension-3 locus nowhere
        let (x, y) = (f.random_point(&mut rng, 10), f.random_point(&mut rng, 10));
        assert_eq!(line_secancy(&f, &t, &x, &y, &mut rng).unwrap().degree(), 0);
    }

    #[test]
    fn identity_acts_by_three() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_trivector(&f, &mut rng, true);
        let th = infinitesimal_action(&f, &t, &FqMatrix::identity(10));
        let three: Vec<u64> = t.coeffs.iter().map(|&c| f.mul(3, c)).collect();
        assert_eq!(th.coeffs, three);
    }

    #[test]
    fn generic_perp_has_codimension_100() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = random_trivector(&f, &mut rng, false);
        let perp = perp_space(&f, &b);
        assert_eq!(perp.dim(), 20);
        for a in perp.vectors() {
            let a = Trivector::from_coeffs(10, a, true);
            assert!(compose(&f, &b, &a).is_zero());
        }
        let zero = Trivector::zero(10, false);
        assert_eq!(perp_space(&f, &zero).dim(), 120);
    }

    #[test]
    fn generic_composition_is_invertible() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_trivector(&f, &mut rng, true);
        let b = random_trivector(&f, &mut rng, false);
        assert_ne!(compose(&f, &b, &a).det(&f), 0);
        assert!(compose(&f, &b, &Trivector::zero(10, true)).is_zero());
    }
}
