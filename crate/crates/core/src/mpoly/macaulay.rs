//! Graded pieces of homogeneous ideals via Macaulay matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::monomial::{count_monomials, pack, MonomialBasis};
use super::poly::MPoly;
use crate::error::{Error, Result};
use crate::ffla::{elim, FieldCtx, FqMatrix, Subspace};

/// Extra sketch columns beyond the row count.
pub const SKETCH_MARGIN: usize = 64;

/// How the rank of a Macaulay matrix is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    /// Dense elimination of the full matrix.
    Full,
    /// Rank of random column combinations, confirmed by a second sketch.
    Sketch,
    /// Full elimination unless the column count makes sketching cheaper.
    Auto,
}

/// Engine configuration and the random stream used for sketches.
pub struct Macaulay {
    pub method: RankMethod,
    rng: ChaCha8Rng,
}

impl Macaulay {
    pub fn new(seed: u64) -> Self {
        Macaulay {
            method: RankMethod::Auto,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_method(seed: u64, method: RankMethod) -> Self {
        Macaulay {
            method,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Dimension of the degree-`d` part of the ideal generated by `gens`.
    pub fn ideal_dim(&mut self, f: &FieldCtx, gens: &[MPoly], d: usize) -> Result<usize> {
        let gens: Vec<&MPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
        let Some(first) = gens.first() else {
            return Ok(0);
        };
        let n = first.nvars;
        let rows = count_monomials(n, d);
        let target = MonomialBasis::new(n, d);

        // echelonize generators degree by degree so that each product column
        // is sparse and duplicates are dropped
        let maxdeg = gens.iter().map(|g| g.degree as usize).max().unwrap();
        assert!(maxdeg <= d, "generator degree exceeds target degree");
        let mut products: Vec<(Vec<(u128, u64)>, usize)> = Vec::new(); // (generator terms, cofactor degree)
        for e in 0..=maxdeg {
            let of_deg: Vec<&&MPoly> = gens.iter().filter(|g| g.degree as usize == e).collect();
            if of_deg.is_empty() {
                continue;
            }
            let b = MonomialBasis::new(n, e);
            let m = FqMatrix::from_rows(&of_deg.iter().map(|g| g.to_dense(&b)).collect::<Vec<_>>());
            let s = Subspace::from_rows(f, b.len(), m);
            for row in s.vectors() {
                let terms: Vec<(u128, u64)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (pack(&b.exps[i]), c))
                    .collect();
                products.push((terms, d - e));
            }
        }
        let ncols: usize = products.iter().map(|(_, k)| count_monomials(n, *k)).sum();
        if ncols == 0 {
            return Ok(0);
        }

        let use_sketch = match self.method {
            RankMethod::Full => false,
            RankMethod::Sketch => ncols > rows + SKETCH_MARGIN,
            RankMethod::Auto => 2 * ncols > 3 * rows + SKETCH_MARGIN,
        };
        // product columns as (row index, coefficient) lists
        let mut cofactor_cache: Vec<Option<MonomialBasis>> = vec![None; d + 1];
        let mut columns: Vec<Vec<(usize, u64)>> = Vec::with_capacity(ncols);
        for (terms, k) in &products {
            let cb = cofactor_cache[*k].get_or_insert_with(|| MonomialBasis::new(n, *k));
            for m in &cb.exps {
                let pm = pack(m);
                // packed keys add componentwise as long as no field overflows
                columns.push(
                    terms
                        .iter()
                        .map(|&(t, c)| {
                            (
                                target.index_of_packed(t + pm).expect("monomial in range"),
                                c,
                            )
                        })
                        .collect(),
                );
            }
        }

        if !use_sketch {
            let mut a = vec![0u64; ncols * rows];
            for (j, col) in columns.iter().enumerate() {
                for &(i, c) in col {
                    a[j * rows + i] = c;
                }
            }
            return Ok(elim::rank_in_place(f, &mut a, ncols, rows));
        }

        let mut width = rows + SKETCH_MARGIN;
        for _attempt in 0..3 {
            let r1 = self.sketch_rank(f, &columns, rows, width);
            if r1 == rows {
                // a sketch can only lose rank, and rank <= rows
                return Ok(r1);
            }
            let r2 = self.sketch_rank(f, &columns, rows, width);
            if r1 == r2 {
                return Ok(r1);
            }
            width += 2 * SKETCH_MARGIN;
        }
        let r1 = self.sketch_rank(f, &columns, rows, width);
        let r2 = self.sketch_rank(f, &columns, rows, width);
        if r1 == r2 {
            Ok(r1)
        } else {
            Err(Error::SketchDisagreement(r1, r2))
        }
    }

    /// Rank of `M R` where `M` is the `rows x ncols` Macaulay matrix and `R` a
    /// random `ncols x width` matrix generated column by column.
    fn sketch_rank(
        &mut self,
        f: &FieldCtx,
        columns: &[Vec<(usize, u64)>],
        rows: usize,
        width: usize,
    ) -> usize {
        let p = f.p();
        let cap = f.lazy_capacity();
        let mut s = vec![0u64; rows * width];
        let mut r = vec![0u64; width];
        let mut pending = vec![0usize; rows];
        for col in columns {
            for x in r.iter_mut() {
                *x = self.rng.random_range(0..p);
            }
            for &(i, c) in col {
                let row = &mut s[i * width..(i + 1) * width];
                if cap >= 2 {
                    if pending[i] + 1 >= cap {
                        row.iter_mut().for_each(|x| *x %= p);
                        pending[i] = 0;
                    }
                    for (x, &rv) in row.iter_mut().zip(&r) {
                        *x += c * rv;
                    }
                    pending[i] += 1;
                } else {
                    for (x, &rv) in row.iter_mut().zip(&r) {
                        *x = f.mul_add(*x, c, rv);
                    }
                }
            }
        }
        s.iter_mut().for_each(|x| *x %= p);
        elim::rank_in_place(f, &mut s, rows, width)
    }

    /// Hilbert function value `C(d+n-1, n-1) - dim I_d`.
    pub fn hilbert_value(&mut self, f: &FieldCtx, gens: &[MPoly], d: usize) -> Result<usize> {
        let n = gens[0].nvars;
        Ok(count_monomials(n, d) - self.ideal_dim(f, gens, d)?)
    }

    /// Degree of a zero-dimensional projective scheme: the first repeated
    /// value of the Hilbert function starting at the top generator degree.
    pub fn zero_dim_degree(&mut self, f: &FieldCtx, gens: &[MPoly], cap: usize) -> Result<Plateau> {
        let start = gens.iter().map(|g| g.degree as usize).max().unwrap_or(0);
        let mut values = Vec::new();
        let mut prev = self.hilbert_value(f, gens, start)?;
        values.push(prev);
        for d in start + 1..=cap {
            let h = self.hilbert_value(f, gens, d)?;
            values.push(h);
            if h == prev {
                return Ok(Plateau {
                    degree: h,
                    plateau_at: d - 1,
                    values,
                    start,
                });
            }
            prev = h;
        }
        Err(Error::Inconclusive(cap))
    }
}

/// Outcome of a Hilbert-function plateau search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plateau {
    pub degree: usize,
    pub plateau_at: usize,
    pub start: usize,
    pub values: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_a_variable() {
        let f = FieldCtx::new(101).unwrap();
        let w0 = MPoly::var(10, 0);
        let g = w0.mul(&f, &w0);
        let mut m = Macaulay::new(0);
        assert_eq!(m.ideal_dim(&f, &[g], 3).unwrap(), 10);
    }

    #[test]
    fn single_point_has_degree_one() {
        let f = FieldCtx::new(101).unwrap();
        let gens: Vec<MPoly> = (0..3).map(|i| MPoly::var(4, i)).collect();
        let mut m = Macaulay::new(0);
        assert_eq!(m.zero_dim_degree(&f, &gens, 10).unwrap().degree, 1);
    }

    #[test]
    fn complete_intersection_of_quadrics() {
        // three generic quadrics in P^3 meet in 8 points
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = MonomialBasis::new(4, 2);
        let gens: Vec<MPoly> = (0..3)
            .map(|_| MPoly::from_dense(&b, &f.random_vec(&mut rng, b.len())))
            .collect();
        let mut m = Macaulay::new(1);
        assert_eq!(m.zero_dim_degree(&f, &gens, 20).unwrap().degree, 8);
        let mut s = Macaulay::with_method(2, RankMethod::Sketch);
        assert_eq!(s.zero_dim_degree(&f, &gens, 20).unwrap().degree, 8);
    }
}
