//! Weddle and Kummer quartics attached to a Peskine point `q` of `t2`: the
//! fiber of `f_X` over `q` spans a `P^3` meeting `X` in six points, the
//! quadrics restrict to the net of quadrics through those six points, and
//! the branch surface of the induced double cover is a 16-nodal quartic.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::{interpolate, vanishing_forms, MPoly, Macaulay, MonomialBasis};
use crate::multilinear::Trivector;
use crate::syzygy::SyzygySpace;
use crate::trivector::{
    congruence_line_through, line_point, line_secancy, p3_common_zeros, peskine_test,
    slice_subpfaffians,
};
use crate::xquad::{bform, qform, quadric_of_gram, restrict_gram, QuadricSystem};

/// Everything attached to one Peskine point `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SixSecantFrame {
    pub q: Vec<u64>,
    /// `E = ker t2(q, -, -)`.
    pub e: Subspace,
    /// `P_q = ker s'_γ(q)^T`, with the `10 x 4` basis matrix used for `y`.
    pub pq: Subspace,
    pub basis: FqMatrix,
    /// Gram matrices of the ten quadrics restricted to `P_q`.
    pub restricted: Vec<FqMatrix>,
    /// Quadrics of `V10` vanishing on `P_q`.
    pub kernel6: Subspace,
    /// Indices of four quadrics whose restrictions form a basis; the frame
    /// coordinates of `u ∈ E` are `u` read at these indices.
    pub frame_rows: Vec<usize>,
    /// Rational points of `X ∩ P(P_q)` in `y` coordinates.
    pub z6_rational: Vec<Vec<u64>>,
    /// Degree of `X ∩ P(P_q)` over the closure.
    pub z6_degree: usize,
    /// `E` equals the annihilator of `kernel6`.
    pub image_is_e: bool,
}

impl SixSecantFrame {
    /// The four frame quadrics at `y`.
    pub fn map(&self, f: &FieldCtx, y: &[u64]) -> Vec<u64> {
        self.frame_rows
            .iter()
            .map(|&a| qform(f, &self.restricted[a], y))
            .collect()
    }

    /// Frame coordinates of a point of `E`.
    pub fn frame_coords(&self, u: &[u64]) -> Vec<u64> {
        self.frame_rows.iter().map(|&a| u[a]).collect()
    }

    /// Jacobian determinant of the frame map.
    pub fn jacobian_det(&self, f: &FieldCtx, y: &[u64]) -> u64 {
        let rows: Vec<Vec<u64>> = self
            .frame_rows
            .iter()
            .map(|&a| {
                let g = self.restricted[a].mul_vec(f, y);
                g.iter().map(|&x| f.add(x, x)).collect()
            })
            .collect();
        FqMatrix::from_rows(&rows).det(f)
    }

    /// Restricted frame quadrics as polynomials in `y`.
    pub fn frame_quadrics(&self, f: &FieldCtx) -> Vec<MPoly> {
        let b = MonomialBasis::new(4, 2);
        self.frame_rows
            .iter()
            .map(|&a| MPoly::from_dense(&b, &quadric_of_gram(f, &b, &self.restricted[a])))
            .collect()
    }
}

pub fn frame(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
    q: &[u64],
    seed: u64,
) -> Result<SixSecantFrame> {
    let s = syz.s_prime_at(f, q);
    let r = s.rank(f);
    if r != 6 {
        return Err(Error::NotOnPeskine(r));
    }
    let pq = s.transpose().kernel(f);
    let (_, e) = peskine_test(f, t2, q);
    let e = e.ok_or(Error::NotOnPeskine(t2.contract(f, q).rank(f)))?;
    if pq.dim() != 4 || e.dim() != 4 {
        return Err(Error::NonGenericPoint(
            "six-secant space is not a P^3".into(),
        ));
    }
    let basis = FqMatrix::from_cols(&pq.vectors());
    let restricted: Vec<FqMatrix> = v10
        .grams(f)
        .iter()
        .map(|g| restrict_gram(f, g, &basis))
        .collect();
    let b4 = MonomialBasis::new(4, 2);
    let rows: Vec<Vec<u64>> = restricted
        .iter()
        .map(|g| quadric_of_gram(f, &b4, g))
        .collect();
    let m = FqMatrix::from_rows(&rows);
    if m.rank(f) != 4 {
        return Err(Error::NonGenericPoint(
            "restricted quadrics do not have rank 4".into(),
        ));
    }
    let kernel6 = m.left_kernel(f);
    let mut frame_rows = Vec::new();
    let mut acc: Vec<Vec<u64>> = Vec::new();
    for (a, row) in rows.iter().enumerate() {
        acc.push(row.clone());
        if Subspace::span(f, 10, &acc).dim() == acc.len() {
            frame_rows.push(a);
        } else {
            acc.pop();
        }
    }
    let image_is_e = kernel6.annihilator(f) == e;
    let quads: Vec<MPoly> = frame_rows
        .iter()
        .map(|&a| MPoly::from_dense(&b4, &rows[a]))
        .collect();
    let z6_rational = p3_common_zeros(f, &quads);
    let z6_degree = Macaulay::new(seed).zero_dim_degree(f, &quads, 12)?.degree;
    if z6_degree < 6 {
        return Err(Error::NonGenericPoint(format!(
            "six-secant space meets X in {z6_degree} points"
        )));
    }
    let mut qn = q.to_vec();
    f.normalize(&mut qn);
    Ok(SixSecantFrame {
        q: qn,
        e,
        pq,
        basis,
        restricted,
        kernel6,
        frame_rows,
        z6_rational,
        z6_degree,
        image_is_e,
    })
}

/// The Weddle quartic with its behavior at the rational base points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weddle {
    pub quartic: MPoly,
    pub vanishes_at_base: usize,
    pub singular_at_base: usize,
}

pub fn weddle(f: &FieldCtx, fr: &SixSecantFrame, rng: &mut impl Rng) -> Result<Weddle> {
    let samples: Vec<(Vec<u64>, u64)> = (0..75)
        .map(|_| {
            let y = f.random_vec(rng, 4);
            let w = fr.jacobian_det(f, &y);
            (y, w)
        })
        .collect();
    let w = interpolate(f, 4, 4, &samples)?;
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let grad = w.gradient(f);
    let vanish = fr
        .z6_rational
        .iter()
        .filter(|z| w.evaluate(f, z) == 0)
        .count();
    let sing = fr
        .z6_rational
        .iter()
        .filter(|z| grad.iter().all(|g| g.evaluate(f, z) == 0))
        .count();
    Ok(Weddle {
        quartic: w,
        vanishes_at_base: vanish,
        singular_at_base: sing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kummer {
    /// Quartic in frame coordinates.
    pub quartic: MPoly,
    pub lambda: u64,
    pub solution_dim: usize,
    pub fresh_ok: bool,
}

/// The quartic `K` with `K(g(y)) = λ W(y)^2`.
pub fn kummer_quartic(
    f: &FieldCtx,
    fr: &SixSecantFrame,
    w: &Weddle,
    rng: &mut impl Rng,
) -> Result<Kummer> {
    let b = MonomialBasis::new(4, 4);
    let row = |y: &[u64]| {
        let mut r = b.eval_all(f, &fr.map(f, y));
        let wy = w.quartic.evaluate(f, y);
        r.push(f.neg(f.mul(wy, wy)));
        r
    };
    let rows: Vec<Vec<u64>> = (0..80).map(|_| row(&f.random_vec(rng, 4))).collect();
    let ker = FqMatrix::from_rows(&rows).kernel(f);
    if ker.dim() != 1 {
        return Err(Error::Inconsistent(format!(
            "Kummer system has a {}-dimensional solution",
            ker.dim()
        )));
    }
    let sol = ker.vectors().remove(0);
    let quartic = MPoly::from_dense(&b, &sol[..b.len()]);
    let fresh_ok = (0..40).all(|_| f.dot(&row(&f.random_vec(rng, 4)), &sol) == 0);
    Ok(Kummer {
        quartic,
        lambda: sol[b.len()],
        solution_dim: ker.dim(),
        fresh_ok,
    })
}

/// Singular points of the Kummer quartic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub q_is_node: bool,
    /// Images of the lines through pairs of rational base points.
    pub bisecant_images: usize,
    pub bisecant_nodes: usize,
    /// Rational singular points found by enumeration.
    pub rational_nodes: usize,
    /// Degree of the singular scheme over the closure.
    pub total_nodes: usize,
}

fn is_singular(f: &FieldCtx, grad: &[MPoly], u: &[u64]) -> bool {
    grad.iter().all(|g| g.evaluate(f, u) == 0)
}

pub fn nodes(f: &FieldCtx, fr: &SixSecantFrame, k: &Kummer, seed: u64) -> Result<NodeReport> {
    let grad = k.quartic.gradient(f);
    let q_is_node = k.quartic.evaluate(f, &fr.frame_coords(&fr.q)) == 0
        && is_singular(f, &grad, &fr.frame_coords(&fr.q));
    let z = &fr.z6_rational;
    let mut images = Vec::new();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            // every frame quadric vanishes at both ends, so the line maps to the point of mixed terms
            let mut u: Vec<u64> = fr
                .frame_rows
                .iter()
                .map(|&a| bform(f, &fr.restricted[a], &z[i], &z[j]))
                .collect();
            if f.normalize(&mut u) {
                images.push(u);
            }
        }
    }
    let bisecant_nodes = images.iter().filter(|u| is_singular(f, &grad, u)).count();
    let rational_nodes = p3_common_zeros(f, &grad).len();
    let total_nodes = Macaulay::new(seed).zero_dim_degree(f, &grad, 20)?.degree;
    Ok(NodeReport {
        q_is_node,
        bisecant_images: images.len(),
        bisecant_nodes,
        rational_nodes,
        total_nodes,
    })
}

/// The cubic surface of Peskine points of `t2` in `P(E)` other than `q`,
/// in coordinates of the basis of `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicSurface {
    pub cubic: Option<MPoly>,
    pub points: usize,
    pub solution_dim: usize,
    pub nonzero_at_q: bool,
    pub smooth_samples: usize,
    pub samples: usize,
}

impl CubicSurface {
    pub fn passed(&self) -> bool {
        self.solution_dim == 1
            && self.nonzero_at_q
            && self.smooth_samples == self.samples
            && self.samples > 0
    }
}

pub fn cubic_surface(
    f: &FieldCtx,
    t2: &Trivector,
    fr: &SixSecantFrame,
    rng: &mut impl Rng,
) -> Result<CubicSurface> {
    let em = FqMatrix::from_cols(&fr.e.vectors());
    let quartics = slice_subpfaffians(f, t2, &em, rng)?;
    let qy =
        fr.e.coords(f, &fr.q)
            .ok_or_else(|| Error::Internal("q outside its contraction kernel".into()))?;
    let qspan = Subspace::span(f, 4, std::slice::from_ref(&qy));
    let pts: Vec<Vec<u64>> = p3_common_zeros(f, &quartics)
        .into_iter()
        .filter(|y| !qspan.contains(f, y))
        .filter(|y| peskine_test(f, t2, &em.mul_vec(f, y)).0 <= 6)
        .collect();
    let forms = vanishing_forms(f, 4, 3, &pts);
    let solution_dim = forms.len();
    let mut out = CubicSurface {
        cubic: None,
        points: pts.len(),
        solution_dim,
        nonzero_at_q: false,
        smooth_samples: 0,
        samples: 0,
    };
    if solution_dim != 1 {
        return Ok(out);
    }
    let c = forms[0].normalized(f);
    let grad = c.gradient(f);
    out.nonzero_at_q = c.evaluate(f, &qy) != 0;
    let step = (pts.len() / 20).max(1);
    for y in pts.iter().step_by(step).take(20) {
        out.samples += 1;
        if !is_singular(f, &grad, y) {
            out.smooth_samples += 1;
        }
    }
    out.cubic = Some(c);
    Ok(out)
}

/// For a few random `y`, the number of other rational points of `P(P_q)`
/// with the same image (expected: exactly one off the Weddle surface).
pub fn double_cover_fibers(
    f: &FieldCtx,
    fr: &SixSecantFrame,
    samples: usize,
    rng: &mut impl Rng,
) -> Vec<usize> {
    let quads = fr.frame_quadrics(f);
    let mut out = Vec::new();
    while out.len() < samples {
        let mut y = f.random_point(rng, 4);
        let gy = fr.map(f, &y);
        let Some(c) = gy.iter().position(|&x| x != 0) else {
            continue;
        };
        if fr.jacobian_det(f, &y) == 0 {
            continue;
        }
        let minors: Vec<MPoly> = (0..4)
            .filter(|&k| k != c)
            .map(|k| quads[k].scale(f, gy[c]).sub(f, &quads[c].scale(f, gy[k])))
            .collect();
        f.normalize(&mut y);
        let others = p3_common_zeros(f, &minors)
            .into_iter()
            .filter(|z| *z != y && fr.map(f, z).iter().any(|&x| x != 0))
            .count();
        out.push(others);
    }
    out
}

/// The full Kummer pipeline for one Peskine point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerReport {
    pub frame: SixSecantFrame,
    pub weddle: Weddle,
    pub kummer: Kummer,
    pub nodes: NodeReport,
    pub cubic: CubicSurface,
    pub fibers: Vec<usize>,
}

impl KummerReport {
    pub fn passed(&self) -> bool {
        let z = self.frame.z6_rational.len();
        let pairs = z * (z.saturating_sub(1)) / 2;
        self.frame.z6_degree == 6
            && self.frame.image_is_e
            && self.weddle.vanishes_at_base == z
            && self.weddle.singular_at_base == z
            && self.kummer.solution_dim == 1
            && self.kummer.fresh_ok
            && self.nodes.q_is_node
            && self.nodes.bisecant_nodes == pairs
            && self.nodes.rational_nodes <= 16
            && self.nodes.total_nodes == 16
            && self.cubic.passed()
            && self.fibers.iter().all(|&n| n == 1)
    }
}

pub fn kummer_pipeline(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
    q: &[u64],
    seed: u64,
    rng: &mut impl Rng,
) -> Result<KummerReport> {
    let fr = frame(f, v10, syz, t2, q, seed)?;
    let w = weddle(f, &fr, rng)?;
    let k = kummer_quartic(f, &fr, &w, rng)?;
    let nodes = nodes(f, &fr, &k, seed)?;
    let cubic = cubic_surface(f, t2, &fr, rng)?;
    let fibers = double_cover_fibers(f, &fr, 3, rng);
    Ok(KummerReport {
        frame: fr,
        weddle: w,
        kummer: k,
        nodes,
        cubic,
        fibers,
    })
}

/// Outcome of the tangent-space decomposition at a branch point `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangentDecomposition {
    Skipped {
        reason: String,
        tries: usize,
    },
    Done {
        tries: usize,
        line_in_all: bool,
        direct_sum_dim: usize,
        on_all_kummers: bool,
    },
}

/// Search branch points `r = f_X(p)`, `p` a rational ramification point on a
/// random line, whose congruence line meets the Peskine variety in four
/// rational points, then compare the four contraction kernels along it.
pub fn tangent_decomposition(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
    budget: usize,
    seed: u64,
    rng: &mut impl Rng,
) -> Result<TangentDecomposition> {
    for tries in 1..=budget {
        let (a, b) = (f.random_point(rng, 10), f.random_point(rng, 10));
        let Ok(ram) = crate::cover::ramification_on_line(f, v10, &a, &b) else {
            continue;
        };
        let Ok(roots) = ram.roots(f, rng) else {
            continue;
        };
        for (s, t) in roots.rational() {
            let p = line_point(f, &a, &b, s, t);
            let Ok(r) = crate::cover::f_x(f, v10, &p) else {
                continue;
            };
            let Ok(line) = congruence_line_through(f, t2, &r) else {
                continue;
            };
            let lv = line.vectors();
            let Ok(sec) = line_secancy(f, t2, &lv[0], &lv[1], rng) else {
                continue;
            };
            let pts = sec.rational_points(f, &lv[0], &lv[1]);
            if sec.degree() != 4 || pts.len() != 4 {
                continue;
            }
            let mut line_in_all = true;
            let mut quotients = Vec::new();
            let mut on_all = true;
            for pi in &pts {
                let (_, e) = peskine_test(f, t2, pi);
                let Some(e) = e else {
                    line_in_all = false;
                    continue;
                };
                line_in_all &= e.contains_space(f, &line);
                quotients.extend(e.vectors());
                match kummer_for(f, v10, syz, t2, pi, seed, rng) {
                    Ok((fr, k)) => on_all &= k.quartic.evaluate(f, &fr.frame_coords(&r)) == 0,
                    Err(_) => on_all = false,
                }
            }
            // dim(Σ E_i / L) = dim(Σ E_i) - 2
            let sum = Subspace::span(f, 10, &quotients).dim();
            return Ok(TangentDecomposition::Done {
                tries,
                line_in_all,
                direct_sum_dim: sum.saturating_sub(2),
                on_all_kummers: on_all,
            });
        }
    }
    Ok(TangentDecomposition::Skipped {
        reason: "no branch point with four rational secancy points".into(),
        tries: budget,
    })
}

fn kummer_for(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
    q: &[u64],
    seed: u64,
    rng: &mut impl Rng,
) -> Result<(SixSecantFrame, Kummer)> {
    let fr = frame(f, v10, syz, t2, q, seed)?;
    let w = weddle(f, &fr, rng)?;
    let k = kummer_quartic(f, &fr, &w, rng)?;
    Ok((fr, k))
}
