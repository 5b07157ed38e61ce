use super::monomial::MonomialBasis;
use super::poly::MPoly;
use crate::error::{Error, Result};
use crate::ffla::{FieldCtx, FqMatrix, Solve, Subspace};

/// The degree-`d` form taking prescribed values at the sample points.
///
/// Fails when the samples are inconsistent with any form of that degree, or
/// when they do not determine the form uniquely.
pub fn interpolate(
    f: &FieldCtx,
    nvars: usize,
    d: usize,
    samples: &[(Vec<u64>, u64)],
) -> Result<MPoly> {
    let b = MonomialBasis::new(nvars, d);
    let rows: Vec<Vec<u64>> = samples.iter().map(|(pt, _)| b.eval_all(f, pt)).collect();
    let m = FqMatrix::from_rows(&rows);
    let vals: Vec<u64> = samples.iter().map(|(_, v)| *v).collect();
    if m.rank(f) < b.len() {
        return Err(Error::Inconsistent(format!(
            "{} samples do not determine a degree-{} form in {} variables",
            samples.len(),
            d,
            nvars
        )));
    }
    match m.solve(f, &vals) {
        Solve::Consistent(c) => Ok(MPoly::from_dense(&b, &c)),
        Solve::Inconsistent => Err(Error::Inconsistent(format!(
            "samples do not lie on a degree-{d} form"
        ))),
    }
}

/// Interpolate several value columns sharing one set of sample points.
pub fn interpolate_many(
    f: &FieldCtx,
    nvars: usize,
    d: usize,
    points: &[Vec<u64>],
    values: &[Vec<u64>],
) -> Result<Vec<MPoly>> {
    let b = MonomialBasis::new(nvars, d);
    let rows: Vec<Vec<u64>> = points.iter().map(|pt| b.eval_all(f, pt)).collect();
    let m = FqMatrix::from_rows(&rows);
    // one elimination on [A | V]
    let k = values.len();
    let n = b.len();
    let mut aug = FqMatrix::zeros(points.len(), n + k);
    for i in 0..points.len() {
        aug.row_mut(i)[..n].copy_from_slice(m.row(i));
        for (j, col) in values.iter().enumerate() {
            aug.set(i, n + j, col[i]);
        }
    }
    let (r, piv) = aug.rref(f);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::Inconsistent(format!(
            "{} samples do not determine a degree-{} form in {} variables",
            points.len(),
            d,
            nvars
        )));
    }
    if piv.len() > n {
        return Err(Error::Inconsistent(format!(
            "samples do not lie on a degree-{d} form"
        )));
    }
    Ok((0..k)
        .map(|j| {
            let c: Vec<u64> = (0..n).map(|i| r.get(i, n + j)).collect();
            MPoly::from_dense(&b, &c)
        })
        .collect())
}

/// Basis of the degree-`d` forms vanishing at all given points.
pub fn vanishing_forms(f: &FieldCtx, nvars: usize, d: usize, points: &[Vec<u64>]) -> Vec<MPoly> {
    let b = MonomialBasis::new(nvars, d);
    let ker = vanishing_space(f, &b, points);
    ker.vectors()
        .iter()
        .map(|v| MPoly::from_dense(&b, v))
        .collect()
}

/// Coefficient space of forms in `b` vanishing at the points.
pub fn vanishing_space(f: &FieldCtx, b: &MonomialBasis, points: &[Vec<u64>]) -> Subspace {
    if points.is_empty() {
        return Subspace::full(b.len());
    }
    let rows: Vec<Vec<u64>> = points.iter().map(|pt| b.eval_all(f, pt)).collect();
    FqMatrix::from_rows(&rows).kernel(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn recovers_linear_form() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = MPoly::linear(&[1, 1]);
        let samples: Vec<(Vec<u64>, u64)> = (0..4)
            .map(|_| {
                let pt = f.random_point(&mut rng, 2);
                let v = g.evaluate(&f, &pt);
                (pt, v)
            })
            .collect();
        assert_eq!(interpolate(&f, 2, 1, &samples).unwrap(), g);
    }

    #[test]
    fn wrong_degree_is_inconsistent() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = MPoly::linear(&[1, 2, 3]).pow(&f, 3);
        let samples: Vec<(Vec<u64>, u64)> = (0..30)
            .map(|_| {
                let pt = f.random_point(&mut rng, 3);
                let v = g.evaluate(&f, &pt);
                (pt, v)
            })
            .collect();
        assert!(interpolate(&f, 3, 2, &samples).is_err());
        assert_eq!(interpolate(&f, 3, 3, &samples).unwrap(), g);
    }
}
