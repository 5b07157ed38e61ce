use std::collections::HashMap;

/// Exponent vector of a monomial.
pub type Exps = Vec<u32>;

/// Number of degree-`d` monomials in `n` variables, `C(d+n-1, n-1)`.
pub fn count_monomials(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(d + n - 1, n - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Pack an exponent vector into a hash key (7 bits per variable).
#[inline]
pub fn pack(e: &[u32]) -> u128 {
    debug_assert!(e.len() <= 18);
    let mut k = 0u128;
    for &x in e {
        debug_assert!(x < 128);
        k = (k << 7) | x as u128;
    }
    k
}

/// All degree-`d` monomials in `n` variables, in graded lexicographic order
/// with `x0` largest: `x0^d` comes first and `x_{n-1}^d` last.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: usize,
    pub exps: Vec<Exps>,
    index: HashMap<u128, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        assert!(
            nvars <= 18 && degree < 128,
            "monomial basis too large to index"
        );
        let mut exps = Vec::with_capacity(count_monomials(nvars, degree));
        let mut cur = vec![0u32; nvars];
        fill(&mut exps, &mut cur, 0, degree as u32);
        let index = exps.iter().enumerate().map(|(i, e)| (pack(e), i)).collect();
        MonomialBasis {
            nvars,
            degree,
            exps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(&pack(e)).copied()
    }

    #[inline]
    pub fn index_of_packed(&self, k: u128) -> Option<usize> {
        self.index.get(&k).copied()
    }

    /// Values of all basis monomials at a point.
    pub fn eval_all(&self, f: &crate::ffla::FieldCtx, pt: &[u64]) -> Vec<u64> {
        assert_eq!(pt.len(), self.nvars);
        // powers table
        let pows: Vec<Vec<u64>> = pt
            .iter()
            .map(|&x| {
                let mut v = vec![1u64; self.degree + 1];
                for i in 1..=self.degree {
                    v[i] = f.mul(v[i - 1], x);
                }
                v
            })
            .collect();
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .fold(1, |acc, (i, &k)| f.mul(acc, pows[i][k as usize]))
            })
            .collect()
    }

    /// `Σ c_i m_i(pt)` for a dense coefficient vector on this basis.
    pub fn eval_form(&self, f: &crate::ffla::FieldCtx, c: &[u64], pt: &[u64]) -> u64 {
        let m = self.eval_all(f, pt);
        f.dot(c, &m)
    }
}

fn fill(out: &mut Vec<Exps>, cur: &mut Vec<u32>, var: usize, left: u32) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    if var == n - 1 {
        cur[var] = left;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e;
        fill(out, cur, var + 1, left - e);
    }
    cur[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let b = MonomialBasis::new(10, 2);
        assert_eq!(b.len(), 55);
        assert_eq!(b.exps[0][0], 2);
        assert_eq!(b.exps[1], vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(MonomialBasis::new(4, 3).len(), 20);
        assert_eq!(count_monomials(10, 6), 5005);
        assert_eq!(binomial(10, 3), 120);
        for (i, e) in b.exps.iter().enumerate() {
            assert_eq!(b.index_of(e), Some(i));
        }
    }
}
