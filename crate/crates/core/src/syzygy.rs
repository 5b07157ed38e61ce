//! Linear syzygies `V8` of the quadrics through `X`, the skew form `φ`, the
//! trivector `t2`, and pointwise checks on the vertex bundle.

use serde::{Deserialize, Serialize};

use crate::error::{not_generic, Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::MonomialBasis;
use crate::multilinear::{wedge2_pairs, Trivector};
use crate::xquad::{quad_basis, restrict_gram, QuadricSystem, Ruling};

/// Coefficients of the product of two linear forms in the 55 quadric
/// monomials of `w0..w9`.
pub fn linear_product(f: &FieldCtx, u: &[u64], v: &[u64]) -> Vec<u64> {
    let n = u.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(f.mul(u[i], v[i]));
        for j in i + 1..n {
            out.push(f.add(f.mul(u[i], v[j]), f.mul(u[j], v[i])));
        }
    }
    out
}

/// `V8 ⊂ V10 ⊗ W10`, indexed `a * 10 + i` for quadric `Q_a` times `w_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygySpace {
    /// `8 x 100`; the echelon basis of the kernel unless rebased.
    pub basis: FqMatrix,
}

impl SyzygySpace {
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn span(&self, f: &FieldCtx) -> Subspace {
        Subspace::from_rows(f, 100, self.basis.clone())
    }

    /// `γ[k][a][i]`.
    pub fn gamma(&self, k: usize, a: usize, i: usize) -> u64 {
        self.basis.get(k, a * 10 + i)
    }

    /// Linear form `ℓ_{a,k}` multiplying `Q_a` in syzygy `k`.
    pub fn linear_form(&self, k: usize, a: usize) -> &[u64] {
        &self.basis.row(k)[a * 10..a * 10 + 10]
    }

    /// The `10 x 8` matrix `s_γ(w)` with entries `ℓ_{a,k}(w)`.
    pub fn s_gamma_at(&self, f: &FieldCtx, w: &[u64]) -> FqMatrix {
        let mut s = FqMatrix::zeros(10, self.dim());
        for k in 0..self.dim() {
            for a in 0..10 {
                s.set(a, k, f.dot(self.linear_form(k, a), w));
            }
        }
        s
    }

    /// The `10 x 8` matrix `s'_γ(u)` over `P(V10^∨)`: entry `[i][k]` is
    /// `Σ_a u_a γ[k][a][i]`.
    pub fn s_prime_at(&self, f: &FieldCtx, u: &[u64]) -> FqMatrix {
        let mut s = FqMatrix::zeros(10, self.dim());
        for k in 0..self.dim() {
            for i in 0..10 {
                let mut acc = 0;
                for (a, &ua) in u.iter().enumerate() {
                    acc = f.mul_add(acc, ua, self.gamma(k, a, i));
                }
                s.set(i, k, acc);
            }
        }
        s
    }

    /// Same syzygies in a different basis: row `k` of `g` gives the new
    /// `k`-th basis vector as a combination of the current ones.
    pub fn rebased(&self, f: &FieldCtx, g: &FqMatrix) -> SyzygySpace {
        SyzygySpace {
            basis: g.mul(f, &self.basis),
        }
    }
}

/// Kernel of `V10 ⊗ W10 -> S^3 W10`.
pub fn linear_syzygies(f: &FieldCtx, v10: &QuadricSystem) -> Result<SyzygySpace> {
    let q2 = quad_basis();
    let q3 = MonomialBasis::new(10, 3);
    let mut m = FqMatrix::zeros(q3.len(), 100);
    for a in 0..10 {
        let q = v10.coeffs(a);
        for i in 0..10 {
            for (s, e) in q2.exps.iter().enumerate() {
                if q[s] == 0 {
                    continue;
                }
                let mut e3 = e.clone();
                e3[i] += 1;
                let r = q3.index_of(&e3).unwrap();
                m.set(r, a * 10 + i, f.add(m.get(r, a * 10 + i), q[s]));
            }
        }
    }
    let space = m.kernel(f);
    if space.dim() != 8 {
        return Err(not_generic("v8_dim"));
    }
    Ok(SyzygySpace { basis: space.basis })
}

/// `{Q ∈ V10 : ∇Q(x) = 0}` in `V10` coordinates.
pub fn singular_at(f: &FieldCtx, v10: &QuadricSystem, x: &[u64]) -> Subspace {
    v10.jacobian(f, x).left_kernel(f)
}

/// Image of `s_γ(x)`, checked against the quadrics singular at `x`.
pub fn vertex_fiber(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    x: &[u64],
) -> Result<Subspace> {
    let img = syz.s_gamma_at(f, x).image(f);
    let sing = singular_at(f, v10, x);
    if img != sing {
        return Err(Error::Internal(format!(
            "vertex fiber of dim {} differs from singular quadrics of dim {}",
            img.dim(),
            sing.dim()
        )));
    }
    Ok(img)
}

/// Kernel of `s_γ(x)` in `V8`. Unlike the image in `V10`, which moves
/// with `x`, this is pulled back from the surface and so is constant along
/// each ruling.
pub fn syzygy_kernel_at(f: &FieldCtx, syz: &SyzygySpace, x: &[u64]) -> Subspace {
    syz.s_gamma_at(f, x).kernel(f)
}

/// Skew form `φ` on `V8^∨` spanning the kernel of `ψ ↦ s_γ ψ s_γ^T mod V10`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticPhi {
    pub phi: FqMatrix,
    pub kernel_dim: usize,
}

/// Quadric `(s_γ ψ s_γ^T)_{ab}` as a dense 55-vector, for a general `ψ`.
fn composed_entry(f: &FieldCtx, syz: &SyzygySpace, psi: &FqMatrix, a: usize, b: usize) -> Vec<u64> {
    let n = syz.dim();
    let mut out = vec![0u64; 55];
    for k in 0..n {
        // u = Σ_l ψ_kl ℓ_{b,l}
        let mut u = vec![0u64; 10];
        for l in 0..n {
            let c = psi.get(k, l);
            if c == 0 {
                continue;
            }
            for (x, &y) in u.iter_mut().zip(syz.linear_form(l, b)) {
                *x = f.mul_add(*x, c, y);
            }
        }
        for (o, v) in out
            .iter_mut()
            .zip(linear_product(f, syz.linear_form(k, a), &u))
        {
            *o = f.add(*o, v);
        }
    }
    out
}

pub fn phi_compute(f: &FieldCtx, v10: &QuadricSystem, syz: &SyzygySpace) -> Result<SymplecticPhi> {
    let n = syz.dim();
    // column (k, l) of the 4500 x 64 system
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let mut col = Vec::with_capacity(100 * 45);
            for a in 0..10 {
                for b in 0..10 {
                    let q = linear_product(f, syz.linear_form(k, a), syz.linear_form(l, b));
                    col.extend(v10.space.quotient_coords(f, &q));
                }
            }
            cols.push(col);
        }
    }
    let ker = FqMatrix::from_cols(&cols).kernel(f);
    if ker.dim() != 1 {
        return Err(not_generic("phi_kernel_dim"));
    }
    let mut v = ker.vectors().remove(0);
    f.normalize(&mut v);
    let phi = FqMatrix {
        rows: n,
        cols: n,
        data: v,
    };
    if !phi.is_skew(f) {
        return Err(not_generic("phi_skew"));
    }
    if phi.det(f) == 0 {
        return Err(not_generic("phi_invertible"));
    }
    Ok(SymplecticPhi {
        phi,
        kernel_dim: ker.dim(),
    })
}

/// Both isotropy forms at a point of `X`: `φ` on `im s_γ(x)^T` and `φ^{-1}`
/// on `ker s_γ(x)`. Returns the dimensions of the two 4-spaces.
pub fn phi_isotropy(
    f: &FieldCtx,
    syz: &SyzygySpace,
    phi: &SymplecticPhi,
    x: &[u64],
) -> Result<(usize, usize)> {
    let s = syz.s_gamma_at(f, x);
    let coimage = s.transpose().image(f);
    let ker = s.kernel(f);
    let inv = phi
        .phi
        .inverse(f)
        .ok_or_else(|| Error::Internal("φ not invertible".into()))?;
    for (sp, form) in [(&coimage, &phi.phi), (&ker, &inv)] {
        let e = FqMatrix::from_cols(&sp.vectors());
        if !restrict_gram(f, form, &e).is_zero() {
            return Err(Error::Internal(
                "φ not isotropic on the vertex kernel".into(),
            ));
        }
    }
    Ok((coimage.dim(), ker.dim()))
}

/// `t2 ∈ ∧^3 V10` from the `V10` coordinates of the entries of
/// `s_γ φ s_γ^T`, normalized.
pub fn t2_compute(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    phi: &SymplecticPhi,
) -> Result<Trivector> {
    let mut c = vec![0u64; 1000];
    for a in 0..10 {
        for b in 0..10 {
            let q = composed_entry(f, syz, &phi.phi, a, b);
            let coords = v10
                .coords(f, &q)
                .ok_or_else(|| Error::Internal(format!("entry ({a}, {b}) not in V10")))?;
            for (cc, &v) in coords.iter().enumerate() {
                c[(a * 10 + b) * 10 + cc] = v;
            }
        }
    }
    let mut t = Trivector::from_tensor(f, 10, &c, false)
        .map_err(|e| Error::Internal(format!("t2 not alternating: {e}")))?;
    if t.is_zero() {
        return Err(Error::Internal("t2 vanishes".into()));
    }
    t.normalize(f);
    Ok(t)
}

/// Koszul relations among the quadrics, modulo those coming from linear
/// syzygies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSyzygyReport {
    pub linear_part_dim: usize,
    pub koszul_image_dim: usize,
    pub kernel_dim: usize,
    pub kernel_is_flattening: bool,
    pub flattening_rank: usize,
}

pub fn quadratic_syzygy_check(
    f: &FieldCtx,
    v10: &QuadricSystem,
    syz: &SyzygySpace,
    t2: &Trivector,
) -> QuadraticSyzygyReport {
    // V10 ⊗ S^2 W10 indexed a * 55 + s
    let mut lin = Vec::new();
    for k in 0..syz.dim() {
        for j in 0..10 {
            let mut e = vec![0u64; 10];
            e[j] = 1;
            let mut v = Vec::with_capacity(550);
            for a in 0..10 {
                v.extend(linear_product(f, syz.linear_form(k, a), &e));
            }
            lin.push(v);
        }
    }
    let linear = Subspace::span(f, 550, &lin);
    let rows: Vec<Vec<u64>> = wedge2_pairs(10)
        .into_iter()
        .map(|(a, b)| {
            let mut v = vec![0u64; 550];
            for (s, &c) in v10.coeffs(b).iter().enumerate() {
                v[a * 55 + s] = c;
            }
            for (s, &c) in v10.coeffs(a).iter().enumerate() {
                v[b * 55 + s] = f.sub(v[b * 55 + s], c);
            }
            linear.quotient_coords(f, &v)
        })
        .collect();
    let m = FqMatrix::from_rows(&rows);
    let kernel = m.left_kernel(f);
    let flat = t2.flattening(f);
    let flat_span = Subspace::from_rows(f, 45, flat);
    QuadraticSyzygyReport {
        linear_part_dim: linear.dim(),
        koszul_image_dim: m.rank(f),
        kernel_dim: kernel.dim(),
        kernel_is_flattening: kernel == flat_span,
        flattening_rank: flat_span.dim(),
    }
}

/// `t2` evaluated on all triples of a basis of the annihilator of the vertex
/// fiber at `x`; every value should be zero.
pub fn dv_sixplane_values(vertex: &Subspace, f: &FieldCtx, t2: &Trivector) -> (usize, Vec<u64>) {
    let u6 = vertex.annihilator(f);
    (u6.dim(), t2.restricted_values(f, &u6.vectors()))
}

/// Restriction of `V10` to the span of two skew rulings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalGenerationReport {
    pub image_dim: usize,
    pub through_lines_dim: usize,
    pub contained: bool,
}

pub fn global_generation_check(
    f: &FieldCtx,
    v10: &QuadricSystem,
    r1: &Ruling,
    r2: &Ruling,
) -> Result<GlobalGenerationReport> {
    let span = r1.span.sum(f, &r2.span);
    if span.dim() != 4 {
        return Err(Error::NonGenericPoint("rulings are not skew".into()));
    }
    let e = FqMatrix::from_cols(&span.vectors());
    let b4 = MonomialBasis::new(4, 2);
    let image = Subspace::span(
        f,
        10,
        &v10.grams(f)
            .iter()
            .map(|a| crate::xquad::quadric_of_gram(f, &b4, &restrict_gram(f, a, &e)))
            .collect::<Vec<_>>(),
    );
    // three points on each ruling, in span coordinates
    let mut pts = Vec::new();
    for r in [r1, r2] {
        for (s, t) in [(1, 0), (0, 1), (1, 1)] {
            let w = r.point(f, s, t);
            pts.push(span.coords(f, &w).expect("ruling inside span"));
        }
    }
    let through = crate::mpoly::vanishing_space(f, &b4, &pts);
    Ok(GlobalGenerationReport {
        image_dim: image.dim(),
        through_lines_dim: through.dim(),
        contained: through.contains_space(f, &image),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_product_matches_polynomial_product() {
        use crate::mpoly::MPoly;
        let f = FieldCtx::new(101).unwrap();
        let u: Vec<u64> = (0..10).map(|i| (3 * i + 1) % 101).collect();
        let v: Vec<u64> = (0..10).map(|i| (7 * i + 5) % 101).collect();
        let p = MPoly::linear(&u).mul(&f, &MPoly::linear(&v));
        assert_eq!(linear_product(&f, &u, &v), p.to_dense(&quad_basis()));
    }
}
