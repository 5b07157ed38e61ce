//! The random seed `(M, N)`, the quotient `W10 = S21 / ((V*⊗M) ⊕ N)`, and the
//! maps `α` over `P^3` and `β` over `P^9`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{not_generic, Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Subspace};
use crate::mpoly::MPoly;
use crate::multilinear::Schur4;
use crate::rng::stream;

/// Default number of redraws before a seed is declared non-generic.
pub const SEED_RETRIES: usize = 8;

/// The two random subspaces defining the model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub p: u64,
    pub rng_seed: u64,
    /// 2-dimensional subspace of quadrics in `x0..x3` (ambient 10).
    pub m: Subspace,
    /// 2-dimensional subspace of `S21` coordinates (ambient 20).
    pub n: Subspace,
    /// Failed draws before this one, with the failing check.
    pub retry_log: Vec<String>,
}

/// `α[j][i][k]`: source coset `j` (8), target coordinate `i` of `W10` (10),
/// linear in the coordinate `x_k` (4).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaTensor {
    pub a: Vec<u64>,
}

impl AlphaTensor {
    #[inline]
    pub fn get(&self, j: usize, i: usize, k: usize) -> u64 {
        self.a[j * 40 + i * 4 + k]
    }
}

/// Everything derived deterministically from a [`Seed`].
#[derive(Clone, Debug)]
pub struct MukaiModel {
    pub f: FieldCtx,
    pub seed: Seed,
    pub schur: Schur4,
    /// `(V*⊗M) ⊕ N` inside `S21` coordinates; dimension 10.
    pub kernel: Subspace,
    /// Monomials of `S2` indexing the coset representatives of `S2/M`.
    pub m_cosets: Vec<usize>,
    pub alpha: AlphaTensor,
}

/// Outcome of the genericity checks on a seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedReport {
    pub kernel_dim: usize,
    pub w_dim: usize,
    pub alpha_ranks: Vec<usize>,
    pub square_outside_m: bool,
}

impl SeedReport {
    pub fn failing_check(&self) -> Option<&'static str> {
        if self.kernel_dim != 10 {
            Some("kernel_dim")
        } else if self.w_dim != 10 {
            Some("w10_dim")
        } else if self.alpha_ranks.iter().any(|&r| r != 7) {
            Some("alpha_rank")
        } else if !self.square_outside_m {
            Some("cubic_kernel")
        } else {
            None
        }
    }
}

fn draw(f: &FieldCtx, rng: &mut impl Rng, p: u64, rng_seed: u64) -> Seed {
    let mv: Vec<Vec<u64>> = (0..2).map(|_| f.random_vec(rng, 10)).collect();
    let nv: Vec<Vec<u64>> = (0..2).map(|_| f.random_vec(rng, 20)).collect();
    Seed {
        p,
        rng_seed,
        m: Subspace::span(f, 10, &mv),
        n: Subspace::span(f, 20, &nv),
        retry_log: vec![],
    }
}

/// Draw `(M, N)` from the seed stream, redrawing until validation passes.
pub fn generate_seed(f: &FieldCtx, rng_seed: u64, retries: usize) -> Result<MukaiModel> {
    let mut rng = stream(rng_seed, "seed");
    let mut log = Vec::new();
    for _ in 0..=retries {
        let mut seed = draw(f, &mut rng, f.p(), rng_seed);
        if seed.m.dim() != 2 || seed.n.dim() != 2 {
            log.push("subspace_dim".to_string());
            continue;
        }
        seed.retry_log = log.clone();
        let model = MukaiModel::build(f, seed);
        let mut vrng = stream(rng_seed ^ log.len() as u64, "validate");
        let rep = model.validate(&mut vrng);
        match rep.failing_check() {
            None => return Ok(model),
            Some(c) => log.push(c.to_string()),
        }
    }
    Err(not_generic(log.last().map_or("seed", |s| s.as_str())))
}

impl MukaiModel {
    /// Derive `W10` and `α` from a seed. Dimension defects are not fatal
    /// here; [`MukaiModel::validate`] reports them.
    pub fn build(f: &FieldCtx, seed: Seed) -> Self {
        let schur = Schur4::new(f);
        let mut gens: Vec<Vec<u64>> = Vec::new();
        for m in seed.m.vectors() {
            for k in 0..4 {
                let mut x = vec![0; 4];
                x[k] = 1;
                gens.push(schur.s21_coords(f, &schur.tensor(f, &m, &x)));
            }
        }
        gens.extend(seed.n.vectors());
        let kernel = Subspace::span(f, 20, &gens);
        let m_cosets = seed.m.nonpivots();
        let wnp = kernel.nonpivots();
        let mut a = vec![0; m_cosets.len() * wnp.len() * 4];
        let w = wnp.len();
        for (j, &s) in m_cosets.iter().enumerate() {
            let mut q = vec![0; 10];
            q[s] = 1;
            for k in 0..4 {
                let mut x = vec![0; 4];
                x[k] = 1;
                let v = schur.s21_coords(f, &schur.tensor(f, &q, &x));
                let r = kernel.reduce(f, &v);
                for (i, &c) in wnp.iter().enumerate() {
                    a[j * w * 4 + i * 4 + k] = r[c];
                }
            }
        }
        MukaiModel {
            f: *f,
            seed,
            schur,
            kernel,
            m_cosets,
            alpha: AlphaTensor { a },
        }
    }

    pub fn w_dim(&self) -> usize {
        20 - self.kernel.dim()
    }

    /// Quotient map `S21 -> W10` applied to `S21` coordinates.
    pub fn quotient(&self, v: &[u64]) -> Vec<u64> {
        self.kernel.quotient_coords(&self.f, v)
    }

    /// `α` applied to an arbitrary quadric `q` (not just a coset
    /// representative) and linear form `x`.
    pub fn alpha_apply(&self, q: &[u64], x: &[u64]) -> Vec<u64> {
        let f = &self.f;
        self.quotient(&self.schur.s21_coords(f, &self.schur.tensor(f, q, x)))
    }

    /// The `10 x 8` matrix `α_x`.
    pub fn alpha_at(&self, x: &[u64]) -> FqMatrix {
        let f = &self.f;
        let nj = self.m_cosets.len();
        let ni = self.w_dim();
        let mut m = FqMatrix::zeros(ni, nj);
        for j in 0..nj {
            for i in 0..ni {
                let mut s = 0;
                for (k, &xk) in x.iter().enumerate() {
                    s = f.mul_add(s, xk, self.alpha.a[j * ni * 4 + i * 4 + k]);
                }
                m.set(i, j, s);
            }
        }
        m
    }

    /// `T_x^∨ = ker(α_x^T)`, a 3-dimensional subspace of `W10^∨`.
    pub fn t_fiber(&self, x: &[u64]) -> Result<Subspace> {
        let a = self.alpha_at(x);
        let r = a.rank(&self.f);
        if r != 7 {
            return Err(Error::NonGenericPoint(format!("alpha has rank {r} at x")));
        }
        Ok(a.left_kernel(&self.f))
    }

    /// `β_w`: `4 x 8`, entry `[k][j] = Σ_i w_i α[j][i][k]`.
    pub fn beta_at(&self, w: &[u64]) -> FqMatrix {
        let f = &self.f;
        let nj = self.m_cosets.len();
        let ni = self.w_dim();
        let mut m = FqMatrix::zeros(4, nj);
        for k in 0..4 {
            for j in 0..nj {
                let mut s = 0;
                for (i, &wi) in w.iter().enumerate().take(ni) {
                    s = f.mul_add(s, wi, self.alpha.a[j * ni * 4 + i * 4 + k]);
                }
                m.set(k, j, s);
            }
        }
        m
    }

    /// Dimension checks, rank of `α_x` at ten random points, and the check
    /// that `x^2 ∉ M` at those points.
    pub fn validate(&self, rng: &mut impl Rng) -> SeedReport {
        let f = &self.f;
        let mut ranks = Vec::new();
        let mut outside = true;
        if self.w_dim() == 10 && self.m_cosets.len() == 8 {
            for _ in 0..10 {
                let x = f.random_point(rng, 4);
                ranks.push(self.alpha_at(&x).rank(f));
                let sq = MPoly::linear(&x).pow(f, 2).to_dense(&self.schur.s2);
                if self.seed.m.contains(f, &sq) {
                    outside = false;
                }
            }
        }
        SeedReport {
            kernel_dim: self.kernel.dim(),
            w_dim: self.w_dim(),
            alpha_ranks: ranks,
            square_outside_m: outside,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generic_seed_has_rank_seven_alpha() {
        let f = FieldCtx::new(101).unwrap();
        let model = generate_seed(&f, 1, SEED_RETRIES).unwrap();
        assert_eq!(model.kernel.dim(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = f.random_point(&mut rng, 4);
            let t = model.t_fiber(&x).unwrap();
            assert_eq!(t.dim(), 3);
            // T_x^∨ pairs to zero with the image of α_x
            let a = model.alpha_at(&x);
            for w in t.vectors() {
                assert!(a.vec_mul(&f, &w).iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn same_seed_same_model() {
        let f = FieldCtx::new(101).unwrap();
        let a = generate_seed(&f, 42, SEED_RETRIES).unwrap();
        let b = generate_seed(&f, 42, SEED_RETRIES).unwrap();
        assert_eq!(a.seed, b.seed);
        assert_eq!(a.alpha, b.alpha);
    }
}
