//! The ten quadrics through the threefold `X ⊂ P^9`, rational points and
//! rulings of `X`, the Hilbert function check, the rank-8 pencil, and the
//! Plücker model of the surface in `P^16`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{not_generic, Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::{count_monomials, MPoly, Macaulay, MonomialBasis};
use crate::mukai::MukaiModel;
use crate::multilinear::{wedge2, wedge2_pairs};
use crate::proj::ProjectivePoints;

/// Point conditions imposed per plane before the first stabilization test.
pub const PLANE_POINTS: usize = 80;
/// Additional conditions for the second stabilization round.
pub const PLANE_EXTRA: usize = 40;

/// The quadrics through `X`, as an echelonized subspace of the 55 degree-2
/// monomials of `w0..w9`. The echelon rows are the fixed basis `Q_0..Q_9`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSystem {
    pub space: Subspace,
}

pub fn quad_basis() -> MonomialBasis {
    MonomialBasis::new(10, 2)
}

/// Symmetric matrix `A` with `Q(w) = w^T A w` for a quadric in `n` variables.
pub fn gram_of(f: &FieldCtx, b: &MonomialBasis, q: &[u64]) -> FqMatrix {
    let n = b.nvars;
    let half = f.inv(2);
    let mut a = FqMatrix::zeros(n, n);
    for (e, &c) in b.exps.iter().zip(q) {
        if c == 0 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        if idx.len() == 1 {
            a.set(idx[0], idx[0], c);
        } else {
            let h = f.mul(c, half);
            a.set(idx[0], idx[1], h);
            a.set(idx[1], idx[0], h);
        }
    }
    a
}

/// Coefficient vector of `w^T A w`.
pub fn quadric_of_gram(f: &FieldCtx, b: &MonomialBasis, a: &FqMatrix) -> Vec<u64> {
    b.exps
        .iter()
        .map(|e| {
            let idx: Vec<usize> = (0..b.nvars).filter(|&i| e[i] > 0).collect();
            if idx.len() == 1 {
                a.get(idx[0], idx[0])
            } else {
                f.add(a.get(idx[0], idx[1]), a.get(idx[1], idx[0]))
            }
        })
        .collect()
}

/// `E^T A E`: the Gram matrix of a quadric restricted along `E` (`n x k`).
pub fn restrict_gram(f: &FieldCtx, a: &FqMatrix, e: &FqMatrix) -> FqMatrix {
    e.transpose().mul(f, &a.mul(f, e))
}

/// Quadratic form value `v^T A v`.
pub fn qform(f: &FieldCtx, a: &FqMatrix, v: &[u64]) -> u64 {
    f.dot(&a.mul_vec(f, v), v)
}

/// Bilinear value `u^T A v`.
pub fn bform(f: &FieldCtx, a: &FqMatrix, u: &[u64], v: &[u64]) -> u64 {
    f.dot(&a.mul_vec(f, v), u)
}

impl QuadricSystem {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn coeffs(&self, a: usize) -> &[u64] {
        self.space.basis.row(a)
    }

    pub fn polys(&self) -> Vec<MPoly> {
        let b = quad_basis();
        self.space
            .vectors()
            .iter()
            .map(|v| MPoly::from_dense(&b, v))
            .collect()
    }

    pub fn gram(&self, f: &FieldCtx, a: usize) -> FqMatrix {
        gram_of(f, &quad_basis(), self.coeffs(a))
    }

    pub fn grams(&self, f: &FieldCtx) -> Vec<FqMatrix> {
        (0..self.dim()).map(|a| self.gram(f, a)).collect()
    }

    /// Values `(Q_0(w), ..., Q_9(w))`.
    pub fn eval(&self, f: &FieldCtx, w: &[u64]) -> Vec<u64> {
        let m = quad_basis().eval_all(f, w);
        self.space.basis.mul_vec(f, &m)
    }

    pub fn vanishes_at(&self, f: &FieldCtx, w: &[u64]) -> bool {
        self.eval(f, w).iter().all(|&v| v == 0)
    }

    /// Rows are the gradients of `Q_a` at `w`.
    pub fn jacobian(&self, f: &FieldCtx, w: &[u64]) -> FqMatrix {
        let mut j = FqMatrix::zeros(self.dim(), 10);
        for a in 0..self.dim() {
            let g = self.gram(f, a).mul_vec(f, w);
            for (i, &v) in g.iter().enumerate() {
                j.set(a, i, f.add(v, v));
            }
        }
        j
    }

    /// Gram matrix of the member with coordinates `u` in the fixed basis.
    pub fn member_gram(&self, f: &FieldCtx, u: &[u64]) -> FqMatrix {
        gram_of(f, &quad_basis(), &self.space.combine(f, u))
    }

    /// Coordinates of a quadric (55 coefficients) in the fixed basis.
    pub fn coords(&self, f: &FieldCtx, q: &[u64]) -> Option<Vec<u64>> {
        self.space.coords(f, q)
    }
}

/// A rational point of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPoint {
    pub coords: Vec<u64>,
    /// The point of `P^3` whose plane `P(T_x^∨)` contained it.
    pub source: Vec<u64>,
}

/// A line of `X` through a point, given by two spanning points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ruling {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub span: Subspace,
}

impl Ruling {
    pub fn point(&self, f: &FieldCtx, s: u64, t: u64) -> Vec<u64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&x, &y)| f.add(f.mul(s, x), f.mul(t, y)))
            .collect()
    }

    pub fn bivector(&self, f: &FieldCtx) -> Vec<u64> {
        wedge2(f, &self.a, &self.b)
    }
}

/// Quadric space of one plane `π ⊂ P^3` with the sampling record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneQuadrics {
    pub plane: Vec<u64>,
    pub space: Subspace,
    pub conditions: usize,
}

/// Random point of the plane `ℓ = 0` in `P^3`.
fn point_on_plane(f: &FieldCtx, plane_basis: &Subspace, rng: &mut impl Rng) -> Vec<u64> {
    loop {
        let c = f.random_vec(rng, plane_basis.dim());
        let x = plane_basis.combine(f, &c);
        if x.iter().any(|&v| v != 0) {
            return x;
        }
    }
}

/// Random nonzero vector of a subspace.
pub fn random_member(f: &FieldCtx, s: &Subspace, rng: &mut impl Rng) -> Vec<u64> {
    loop {
        let v = s.combine(f, &f.random_vec(rng, s.dim()));
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// Quadrics vanishing on the scroll of planes `P(T_x^∨)` over `x ∈ π`,
/// found by imposing vanishing at sampled points of the scroll.
pub fn plane_quadrics(
    model: &MukaiModel,
    plane: &[u64],
    rng: &mut impl Rng,
) -> Result<PlaneQuadrics> {
    let f = &model.f;
    let b = quad_basis();
    let pb = FqMatrix::from_rows(&[plane.to_vec()]).kernel(f);
    let mut rows = FqMatrix::zeros(0, 55);
    let mut sample = |rows: &mut FqMatrix, count: usize| {
        let mut added = 0;
        let mut tries = 0;
        while added < count {
            tries += 1;
            if tries > 20 * count {
                break;
            }
            let x = point_on_plane(f, &pb, rng);
            let Ok(t) = model.t_fiber(&x) else { continue };
            let w = random_member(f, &t, rng);
            rows.push_row(&b.eval_all(f, &w));
            added += 1;
        }
    };
    sample(&mut rows, PLANE_POINTS);
    let first = rows.kernel(f);
    sample(&mut rows, PLANE_EXTRA);
    let second = rows.kernel(f);
    if first != second || second.dim() != 4 {
        return Err(Error::NonGenericPlane(second.dim()));
    }
    Ok(PlaneQuadrics {
        plane: plane.to_vec(),
        space: second,
        conditions: rows.rows,
    })
}

/// Record of the plane sweep that produced `V10`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct V10Assembly {
    pub system: QuadricSystem,
    pub planes: Vec<PlaneQuadrics>,
    /// Dimension of the running span after each accepted plane.
    pub running_dims: Vec<usize>,
    /// Planes needed to first reach dimension 10.
    pub planes_needed: usize,
    /// Span dimension after the extra confirmation planes.
    pub confirmed_dim: usize,
    pub rejected_planes: usize,
}

/// Span of per-plane quadric spaces over `n_planes` generic planes, then
/// four more planes to confirm the span does not grow.
pub fn assemble_v10(
    model: &MukaiModel,
    n_planes: usize,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<V10Assembly> {
    let f = &model.f;
    let mut planes: Vec<PlaneQuadrics> = Vec::new();
    let mut span = Subspace::zero(55);
    let mut running = Vec::new();
    let mut needed = 0;
    let mut rejected = 0;
    let mut attempts = 0;
    while (planes.len() < n_planes || span.dim() < 10) && attempts < budget {
        attempts += 1;
        let plane = f.random_point(rng, 4);
        match plane_quadrics(model, &plane, rng) {
            Ok(pq) => {
                span = span.sum(f, &pq.space);
                running.push(span.dim());
                if span.dim() >= 10 && needed == 0 {
                    needed = planes.len() + 1;
                }
                planes.push(pq);
            }
            Err(Error::NonGenericPlane(_)) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    if span.dim() < 10 {
        return Err(not_generic("v10_dim"));
    }
    if span.dim() > 10 {
        return Err(Error::Internal(format!(
            "quadric span reached dimension {}",
            span.dim()
        )));
    }
    let mut confirm = span.clone();
    let mut extra = 0;
    while extra < 4 {
        let plane = f.random_point(rng, 4);
        if let Ok(pq) = plane_quadrics(model, &plane, rng) {
            confirm = confirm.sum(f, &pq.space);
            extra += 1;
        }
    }
    Ok(V10Assembly {
        system: QuadricSystem { space: span },
        planes,
        running_dims: running,
        planes_needed: needed,
        confirmed_dim: confirm.dim(),
        rejected_planes: rejected,
    })
}

/// Common zeros of ternary quadratic forms (Gram matrices) in `P^2(F_p)`.
pub fn p2_zeros(f: &FieldCtx, conics: &[FqMatrix]) -> Vec<Vec<u64>> {
    // echelonize the conic coefficients to drop redundant forms
    let b = MonomialBasis::new(3, 2);
    let span = Subspace::span(
        f,
        6,
        &conics
            .iter()
            .map(|a| quadric_of_gram(f, &b, a))
            .collect::<Vec<_>>(),
    );
    let forms = span.vectors();
    if forms.is_empty() {
        return ProjectivePoints::new(3, f.p()).collect();
    }
    ProjectivePoints::new(3, f.p())
        .filter(|y| {
            let m = [
                f.mul(y[0], y[0]),
                f.mul(y[0], y[1]),
                f.mul(y[0], y[2]),
                f.mul(y[1], y[1]),
                f.mul(y[1], y[2]),
                f.mul(y[2], y[2]),
            ];
            forms.iter().all(|c| f.dot(c, &m) == 0)
        })
        .collect()
}

/// Rational points of `X` in the plane `P(T_x^∨)`, plus the degree of the
/// zero scheme over the closure (computed on demand).
pub fn x_points_in_plane(
    model: &MukaiModel,
    v10: &QuadricSystem,
    x: &[u64],
) -> Result<Vec<XPoint>> {
    let f = &model.f;
    let t = model.t_fiber(x)?;
    let e = FqMatrix::from_cols(&t.vectors());
    let conics: Vec<FqMatrix> = v10
        .grams(f)
        .iter()
        .map(|a| restrict_gram(f, a, &e))
        .collect();
    let zeros = p2_zeros(f, &conics);
    if zeros.len() > 4 {
        return Err(not_generic("plane_points"));
    }
    Ok(zeros
        .into_iter()
        .map(|y| {
            let mut w = e.mul_vec(f, &y);
            f.normalize(&mut w);
            XPoint {
                coords: w,
                source: x.to_vec(),
            }
        })
        .collect())
}

/// Degree over the closure of `X ∩ P(T_x^∨)`.
pub fn plane_intersection_degree(
    model: &MukaiModel,
    v10: &QuadricSystem,
    x: &[u64],
    seed: u64,
) -> Result<usize> {
    let f = &model.f;
    let t = model.t_fiber(x)?;
    let e = FqMatrix::from_cols(&t.vectors());
    let b3 = MonomialBasis::new(3, 2);
    let gens: Vec<MPoly> = v10
        .grams(f)
        .iter()
        .map(|a| MPoly::from_dense(&b3, &quadric_of_gram(f, &b3, &restrict_gram(f, a, &e))))
        .collect();
    Ok(Macaulay::new(seed).zero_dim_degree(f, &gens, 20)?.degree)
}

/// Sample rational points of `X` from random planes `P(T_x^∨)`.
pub fn sample_x_points(
    model: &MukaiModel,
    v10: &QuadricSystem,
    count: usize,
    plane_budget: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<XPoint>, usize)> {
    let f = &model.f;
    let mut pts = Vec::new();
    let mut planes = 0;
    while pts.len() < count {
        if planes >= plane_budget {
            return Err(not_generic("x_point_budget"));
        }
        planes += 1;
        let x = f.random_point(rng, 4);
        match x_points_in_plane(model, v10, &x) {
            Ok(v) => pts.extend(v),
            Err(Error::NonGenericPoint(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    pts.truncate(count);
    Ok((pts, planes))
}

/// The unique line of `X` through a smooth point.
pub fn ruling_through(f: &FieldCtx, v10: &QuadricSystem, pt: &[u64]) -> Result<Ruling> {
    let j = v10.jacobian(f, pt);
    let r = j.rank(f);
    if r != 6 {
        return Err(Error::NonGenericPoint(format!("jacobian rank {r}")));
    }
    let tangent = j.kernel(f);
    // complement of pt inside the tangent space: drop one basis vector on
    // which pt has a nonzero coordinate
    let c = tangent
        .coords(f, pt)
        .ok_or_else(|| Error::Internal("point not in its tangent space".into()))?;
    let drop = c.iter().position(|&v| v != 0).unwrap();
    let dirs: Vec<Vec<u64>> = tangent
        .vectors()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i != drop)
        .map(|(_, v)| v)
        .collect();
    let e = FqMatrix::from_cols(&dirs);
    let conics: Vec<FqMatrix> = v10
        .grams(f)
        .iter()
        .map(|a| restrict_gram(f, a, &e))
        .collect();
    let zeros = p2_zeros(f, &conics);
    if zeros.len() != 1 {
        return Err(Error::NonGenericPoint(format!(
            "{} ruling directions",
            zeros.len()
        )));
    }
    let d = e.mul_vec(f, &zeros[0]);
    let span = Subspace::span(f, 10, &[pt.to_vec(), d.clone()]);
    Ok(Ruling {
        a: pt.to_vec(),
        b: d,
        span,
    })
}

/// Hilbert function values `C(m+9,9) - dim I_m` for `m = 2..=m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub values: Vec<(usize, usize)>,
    pub expected: Vec<(usize, usize)>,
    pub ideal_dims: Vec<(usize, usize)>,
    pub third_difference: Vec<i64>,
}

/// `21 P3(m) - 36 P2(m) + 17 P1(m)` with `Pn(m) = C(m+n, n)`.
pub fn hilbert_polynomial(m: usize) -> usize {
    21 * count_monomials(4, m) + 17 * count_monomials(2, m) - 36 * count_monomials(3, m)
}

pub fn hilbert_check(
    f: &FieldCtx,
    v10: &QuadricSystem,
    m_max: usize,
    seed: u64,
) -> Result<HilbertReport> {
    let gens = v10.polys();
    let mut mac = Macaulay::new(seed);
    let mut values = Vec::new();
    let mut dims = Vec::new();
    for m in 2..=m_max {
        let d = mac.ideal_dim(f, &gens, m)?;
        dims.push((m, d));
        values.push((m, count_monomials(10, m) - d));
    }
    let expected = (2..=m_max).map(|m| (m, hilbert_polynomial(m))).collect();
    let v: Vec<i64> = values.iter().map(|&(_, h)| h as i64).collect();
    let third = if v.len() >= 4 {
        (0..v.len() - 3)
            .map(|i| v[i + 3] - 3 * v[i + 2] + 3 * v[i + 1] - v[i])
            .collect()
    } else {
        vec![]
    };
    Ok(HilbertReport {
        values,
        expected,
        ideal_dims: dims,
        third_difference: third,
    })
}

/// Intersection of the per-plane quadric spaces, as coordinates in `V10`
/// (ambient 10) together with its members' Gram ranks on samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pencil {
    /// Subspace of the 55-dimensional quadric space.
    pub space: Subspace,
    pub planes_used: usize,
    pub sampled_ranks: Vec<usize>,
}

pub fn pencil(
    f: &FieldCtx,
    planes: &[PlaneQuadrics],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<Pencil> {
    if planes.len() < 3 {
        return Err(Error::Missing("pencil needs three planes".into()));
    }
    let mut s = planes[0].space.clone();
    for pq in &planes[1..] {
        s = s.intersect(f, &pq.space);
    }
    if s.dim() != 2 {
        return Err(not_generic("pencil_dim"));
    }
    let b = quad_basis();
    let ranks = (0..samples)
        .map(|_| gram_of(f, &b, &random_member(f, &s, rng)).rank(f))
        .collect();
    Ok(Pencil {
        space: s,
        planes_used: planes.len(),
        sampled_ranks: ranks,
    })
}

/// Plücker model of the surface: span of ruling bivectors, its annihilator,
/// and the Hilbert function of the restricted Pfaffian quadrics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerReport {
    pub rulings: usize,
    pub span_dim: usize,
    pub annihilator_dim: usize,
    pub hilbert: Vec<(usize, usize)>,
}

/// Span of the bivectors of the rulings in `∧^2 W10^∨`.
pub fn ruling_span(f: &FieldCtx, rulings: &[Ruling]) -> Subspace {
    Subspace::span(
        f,
        45,
        &rulings.iter().map(|r| r.bivector(f)).collect::<Vec<_>>(),
    )
}

/// The 210 quadratic Pfaffians of the tautological skew matrix on a
/// subspace of `∧^2` with echelon basis `span`, in the subspace coordinates.
pub fn restricted_pfaffians(f: &FieldCtx, span: &Subspace) -> Vec<MPoly> {
    let k = span.dim();
    let pairs = wedge2_pairs(10);
    // entry (i, j) of the skew matrix as a linear form in k coordinates
    let mut entry = vec![vec![MPoly::zero(k, 1); 10]; 10];
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let coeffs: Vec<u64> = (0..k).map(|r| span.basis.get(r, c)).collect();
        entry[i][j] = MPoly::linear(&coeffs);
    }
    let mut out = Vec::new();
    for i in 0..10 {
        for j in i + 1..10 {
            for l in j + 1..10 {
                for m in l + 1..10 {
                    let a = entry[i][j].mul(f, &entry[l][m]);
                    let b = entry[i][l].mul(f, &entry[j][m]);
                    let c = entry[i][m].mul(f, &entry[j][l]);
                    out.push(a.sub(f, &b).add(f, &c));
                }
            }
        }
    }
    out
}

pub fn plucker_model(
    f: &FieldCtx,
    rulings: &[Ruling],
    m_max: usize,
    seed: u64,
) -> Result<PluckerReport> {
    let span = ruling_span(f, rulings);
    let ann = span.annihilator(f);
    let k = span.dim();
    let gens = restricted_pfaffians(f, &span);
    let mut mac = Macaulay::new(seed);
    let mut hilbert = vec![(1, k)];
    for m in 2..=m_max {
        let d = mac.ideal_dim(f, &gens, m)?;
        hilbert.push((m, count_monomials(k, m) - d));
    }
    Ok(PluckerReport {
        rulings: rulings.len(),
        span_dim: k,
        annihilator_dim: ann.dim(),
        hilbert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_polynomial_values() {
        let v: Vec<usize> = (2..=6).map(hilbert_polynomial).collect();
        assert_eq!(v, vec![45, 128, 280, 522, 875]);
        assert_eq!(hilbert_polynomial(0), 2);
        assert_eq!(hilbert_polynomial(1), 10);
    }

    #[test]
    fn gram_round_trip() {
        let f = FieldCtx::new(101).unwrap();
        let b = quad_basis();
        let q: Vec<u64> = (0..55).map(|i| (i * 7 + 3) % 101).collect();
        let a = gram_of(&f, &b, &q);
        assert!(a.is_symmetric());
        assert_eq!(quadric_of_gram(&f, &b, &a), q);
        let w: Vec<u64> = (0..10).map(|i| i + 2).collect();
        assert_eq!(
            qform(&f, &a, &w),
            MPoly::from_dense(&b, &q).evaluate(&f, &w)
        );
    }
}
