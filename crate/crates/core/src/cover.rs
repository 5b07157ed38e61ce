//! The degree-2 rational map `f_X: P^9 ⇢ P(V10^∨)` given by the quadrics,
//! its involution, invariant lines, and ramification.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::BinaryForm;
use crate::multilinear::Trivector;
use crate::syzygy::SyzygySpace;
use crate::trivector::{line_point, line_secancy};
use crate::xquad::{bform, qform, QuadricSystem};

/// `(Q_0(p) : ... : Q_9(p))`, normalized.
pub fn f_x(f: &FieldCtx, v10: &QuadricSystem, p: &[u64]) -> Result<Vec<u64>> {
    let mut v = v10.eval(f, p);
    if !f.normalize(&mut v) {
        return Err(Error::OnBaseLocus);
    }
    Ok(v)
}

/// Restriction of `w^T A w` to the line `s a + t b` as a binary quadratic.
pub fn restrict_to_line(f: &FieldCtx, g: &FqMatrix, a: &[u64], b: &[u64]) -> BinaryForm {
    let ab = bform(f, g, a, b);
    BinaryForm::new(vec![qform(f, g, a), f.add(ab, ab), qform(f, g, b)])
}

/// The line `l_p`: common zeros of the eight linear forms
/// `Σ_a Q_a(p) ℓ_{a,k}`, i.e. the kernel of `s'_γ(f_X(p))^T`.
pub fn invariant_line(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    p: &[u64],
) -> Result<Subspace> {
    let q = f_x(f, v10, p)?;
    let s = syz.s_prime_at(f, &q);
    let line = s.transpose().kernel(f);
    if line.dim() != 2 {
        return Err(Error::NonGenericPoint(format!(
            "invariant locus of dimension {}",
            line.dim()
        )));
    }
    if !line.contains(f, p) {
        return Err(Error::Internal("invariant line misses its point".into()));
    }
    Ok(line)
}

/// A second spanning point of a line through `p`.
pub fn other_point(f: &FieldCtx, line: &Subspace, p: &[u64]) -> Vec<u64> {
    let v = line.vectors();
    let pp = Subspace::span(f, p.len(), &[p.to_vec()]);
    v.into_iter()
        .find(|x| !pp.contains(f, x))
        .expect("line of dimension 2")
}

/// The image `i_X(p)` with the rank of the restricted quadrics on `l_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    pub image: Vec<u64>,
    pub line: Subspace,
    /// Dimension of the span of the quadrics through `p`, restricted to `l_p`.
    pub restricted_dim: usize,
}

/// Second common root on `l_p` of the quadrics of `V10` through `p`.
pub fn involute(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    p: &[u64],
) -> Result<Involution> {
    let line = invariant_line(f, v10, syz, p)?;
    let r = other_point(f, &line, p);
    let vals = v10.eval(f, p);
    let v9 = FqMatrix::from_rows(&[vals]).kernel(f);
    // each restricted quadric is t (B s + C t); record (B, C)
    let mut forms = Vec::new();
    for c in v9.vectors() {
        let g = v10.member_gram(f, &c);
        let q = restrict_to_line(f, &g, p, &r);
        debug_assert_eq!(q.coeffs[0], 0);
        forms.push(vec![q.coeffs[1], q.coeffs[2]]);
    }
    let span = Subspace::span(f, 2, &forms);
    match span.dim() {
        0 => return Err(Error::LineInX),
        1 => {}
        _ => {
            return Err(Error::NonGenericPoint(
                "restricted quadrics disagree on the second root".into(),
            ))
        }
    }
    let bc = span.vectors().remove(0);
    let mut image = line_point(f, p, &r, bc[1], f.neg(bc[0]));
    if !f.normalize(&mut image) {
        return Err(Error::Internal("zero involution image".into()));
    }
    if v10.vanishes_at(f, &image) {
        return Err(Error::NonGenericPoint("involution image lies on X".into()));
    }
    Ok(Involution {
        image,
        line,
        restricted_dim: span.dim(),
    })
}

/// `det J(p)` with rows the gradients of the ten quadrics.
pub fn ramification_value(f: &FieldCtx, v10: &QuadricSystem, p: &[u64]) -> u64 {
    v10.jacobian(f, p).det(f)
}

/// The degree-10 restriction of the ramification determinant to a line.
pub fn ramification_on_line(
    f: &FieldCtx,
    v10: &QuadricSystem,
    a: &[u64],
    b: &[u64],
) -> Result<BinaryForm> {
    let nodes: Vec<(u64, u64)> = std::iter::once((0, 1))
        .chain((0..12).map(|k| (1, k)))
        .collect();
    let vals: Vec<u64> = nodes
        .iter()
        .map(|&(s, t)| ramification_value(f, v10, &line_point(f, a, b, s, t)))
        .collect();
    let form = BinaryForm::interpolate(f, 10, &nodes[..11], &vals[..11])?;
    for (k, &(s, t)) in nodes.iter().enumerate().skip(11) {
        if form.eval(f, s, t) != vals[k] {
            return Err(Error::Internal(
                "ramification is not a degree-10 form".into(),
            ));
        }
    }
    Ok(form)
}

/// Points `y` of the line `s a + t b` with `f_X(y)` proportional to `q`,
/// as the gcd of the `2 x 2` minors.
pub fn fiber_on_line(
    f: &FieldCtx,
    v10: &QuadricSystem,
    a: &[u64],
    b: &[u64],
    q: &[u64],
) -> BinaryForm {
    let c = q.iter().position(|&x| x != 0).expect("nonzero target");
    let restricted: Vec<BinaryForm> = v10
        .grams(f)
        .iter()
        .map(|g| restrict_to_line(f, g, a, b))
        .collect();
    let mut g = BinaryForm::new(vec![0]);
    for (k, rk) in restricted.iter().enumerate() {
        if k == c {
            continue;
        }
        let coeffs: Vec<u64> = (0..3)
            .map(|i| {
                f.sub(
                    f.mul(q[c], rk.coeffs[i]),
                    f.mul(q[k], restricted[c].coeffs[i]),
                )
            })
            .collect();
        g = g.gcd(f, &BinaryForm::new(coeffs));
    }
    g
}

/// Congruence check for the image of `l_p` under `f_X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub contraction_zero: bool,
    pub secancy_degree: usize,
    pub secancy_roots: usize,
    pub rational_roots: usize,
    /// For each rational root: (rank of `s'_γ`, `dim(P_q ∩ l_p)`, fiber degree on `l_p`).
    pub rank_drop_points: Vec<(usize, usize, usize)>,
}

pub fn invariant_line_congruence_check(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
    p: &[u64],
    rng: &mut impl Rng,
) -> Result<CongruenceReport> {
    let line = invariant_line(f, v10, syz, p)?;
    let r = other_point(f, &line, p);
    let u = f_x(f, v10, p)?;
    // a second point whose image differs from that of p
    let mut v = None;
    for k in 1..f.p().min(20) {
        let w = f_x(f, v10, &line_point(f, p, &r, 1, k))?;
        if FqMatrix::from_rows(&[u.clone(), w.clone()]).rank(f) == 2 {
            v = Some(w);
            break;
        }
    }
    let v = v.ok_or_else(|| Error::NonGenericPoint("invariant line maps to a point".into()))?;
    let contraction_zero = t2.contract2(f, &u, &v).iter().all(|&c| c == 0);
    let sec = line_secancy(f, t2, &u, &v, rng)?;
    let mut drops = Vec::new();
    for q in sec.rational_points(f, &u, &v) {
        let s = syz.s_prime_at(f, &q);
        let pq = s.transpose().kernel(f);
        let meet = pq.intersect(f, &line).dim();
        let fib = fiber_on_line(f, v10, p, &r, &q);
        drops.push((s.rank(f), meet, fib.degree()));
    }
    Ok(CongruenceReport {
        contraction_zero,
        secancy_degree: sec.degree(),
        secancy_roots: sec.roots.total(),
        rational_roots: sec.roots.rational().len(),
        rank_drop_points: drops,
    })
}
