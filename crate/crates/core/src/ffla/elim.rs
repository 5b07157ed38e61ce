//! Dense Gaussian elimination kernels over `F_p`.
//!
//! `rank_in_place` is the workhorse for large Macaulay matrices. It works on
//! column panels: each panel is eliminated in a small cache-resident buffer,
//! the row operations are recorded as multipliers, and the remaining columns
//! are then updated with one multiply-accumulate sweep per row. Entries of the
//! trailing columns stay unreduced in `u64` until a pivot row is extracted or
//! the accumulated products approach the overflow bound.

use super::field::FieldCtx;

const PANEL: usize = 64;

/// Rank of a row-major `rows x cols` buffer. The buffer is destroyed.
pub fn rank_in_place(f: &FieldCtx, a: &mut [u64], rows: usize, cols: usize) -> usize {
    debug_assert_eq!(a.len(), rows * cols);
    if f.p() >= 1 << 32 || f.lazy_capacity() < 2 * PANEL {
        rank_plain(f, a, rows, cols)
    } else {
        rank_blocked(f, a, rows, cols)
    }
}

fn rank_blocked(f: &FieldCtx, a: &mut [u64], rows: usize, cols: usize) -> usize {
    let p = f.p();
    let cap = f.lazy_capacity();
    let mut live: Vec<usize> = (0..rows).collect();
    // products accumulated into the trailing entries of live rows since the
    // last full reduction
    let mut pending = 0usize;
    let mut rank = 0;
    let mut c0 = 0;
    let mut pan: Vec<u64> = Vec::new();
    let mut mult: Vec<u32> = Vec::new();
    let mut e: Vec<u32> = Vec::new();
    let mut acc: Vec<u64> = Vec::new();

    while c0 < cols && !live.is_empty() {
        let cb = PANEL.min(cols - c0);
        let n = live.len();
        pan.clear();
        pan.resize(n * cb, 0);
        for (li, &r) in live.iter().enumerate() {
            let src = &a[r * cols + c0..r * cols + c0 + cb];
            for (d, &s) in pan[li * cb..(li + 1) * cb].iter_mut().zip(src) {
                *d = s % p;
            }
        }
        mult.clear();
        mult.resize(n * PANEL, 0);
        let mut is_piv = vec![false; n];
        let mut pivots: Vec<usize> = Vec::new();
        let mut scale: Vec<u64> = Vec::new();

        for j in 0..cb {
            let mut found = None;
            for li in 0..n {
                if is_piv[li] {
                    continue;
                }
                let v = pan[li * cb + j] % p;
                pan[li * cb + j] = v;
                if v != 0 && found.is_none() {
                    found = Some(li);
                }
            }
            let Some(pl) = found else { continue };
            let k = pivots.len();
            let s = f.inv(pan[pl * cb + j]);
            for jj in j..cb {
                pan[pl * cb + jj] = f.mul(pan[pl * cb + jj] % p, s);
            }
            is_piv[pl] = true;
            pivots.push(pl);
            scale.push(s);
            let (head, rest) = pan.split_at_mut(pl * cb);
            let (prow, below) = rest.split_at_mut(cb);
            let prow = &*prow;
            let mut elim = |li: usize, row: &mut [u64]| {
                let v = row[j];
                if v == 0 {
                    return;
                }
                let m = p - v;
                mult[li * PANEL + k] = m as u32;
                row[j] = 0;
                for jj in j + 1..cb {
                    row[jj] += m * prow[jj];
                }
            };
            for (li, row) in head.chunks_exact_mut(cb).enumerate() {
                if !is_piv[li] {
                    elim(li, row);
                }
            }
            for (off, row) in below.chunks_exact_mut(cb).enumerate() {
                let li = pl + 1 + off;
                if !is_piv[li] {
                    elim(li, row);
                }
            }
        }

        let k = pivots.len();
        let tail0 = c0 + cb;
        let tw = cols - tail0;
        if k > 0 && tw > 0 {
            if pending + k + 1 > cap {
                for &r in &live {
                    for x in &mut a[r * cols + tail0..(r + 1) * cols] {
                        *x %= p;
                    }
                }
                pending = 0;
            }
            e.clear();
            e.resize(k * tw, 0);
            for kk in 0..k {
                let li = pivots[kk];
                let r = live[li];
                acc.clear();
                acc.extend_from_slice(&a[r * cols + tail0..(r + 1) * cols]);
                for jp in 0..kk {
                    let m = mult[li * PANEL + jp] as u64;
                    if m != 0 {
                        for (t, &ev) in acc.iter_mut().zip(&e[jp * tw..(jp + 1) * tw]) {
                            *t += m * ev as u64;
                        }
                    }
                }
                let s = scale[kk];
                for (dst, &t) in e[kk * tw..(kk + 1) * tw].iter_mut().zip(acc.iter()) {
                    *dst = f.mul(t % p, s) as u32;
                }
            }
            for (li, &r) in live.iter().enumerate() {
                if is_piv[li] {
                    continue;
                }
                let tail = &mut a[r * cols + tail0..(r + 1) * cols];
                for jp in 0..k {
                    let m = mult[li * PANEL + jp] as u64;
                    if m != 0 {
                        for (t, &ev) in tail.iter_mut().zip(&e[jp * tw..(jp + 1) * tw]) {
                            *t += m * ev as u64;
                        }
                    }
                }
            }
            pending += k;
        }
        rank += k;
        live = live
            .iter()
            .enumerate()
            .filter(|(li, _)| !is_piv[*li])
            .map(|(_, &r)| r)
            .collect();
        c0 += cb;
    }
    rank
}

/// Textbook elimination with a modular reduction per operation. Used for
/// moduli too large for lazy accumulation.
fn rank_plain(f: &FieldCtx, a: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        swap_rows(a, cols, r, pr);
        let inv = f.inv(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in r + 1..rows {
            let v = a[i * cols + c];
            if v != 0 {
                let m = f.neg(v);
                for j in c..cols {
                    a[i * cols + j] = f.mul_add(a[i * cols + j], m, a[r * cols + j]);
                }
            }
        }
        r += 1;
    }
    r
}

fn swap_rows(a: &mut [u64], cols: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let (x, y) = a.split_at_mut(hi * cols);
    x[lo * cols..(lo + 1) * cols].swap_with_slice(&mut y[..cols]);
}

/// Reduced row echelon form in place. Returns the pivot columns; the first
/// `pivots.len()` rows hold the reduced basis and the rest are zero.
pub fn rref_in_place(f: &FieldCtx, a: &mut [u64], rows: usize, cols: usize) -> Vec<usize> {
    let p = f.p();
    let lazy = p < 1 << 32;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        swap_rows(a, cols, r, pr);
        let inv = f.inv(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        let (head, rest) = a.split_at_mut(r * cols);
        let (prow, tail) = rest.split_at_mut(cols);
        let prow = &prow[c..];
        let step = |row: &mut [u64]| {
            let v = row[c];
            if v == 0 {
                return;
            }
            let m = p - v;
            if lazy {
                for (x, &y) in row[c..].iter_mut().zip(prow) {
                    *x = (*x + m * y) % p;
                }
            } else {
                for (x, &y) in row[c..].iter_mut().zip(prow) {
                    *x = f.mul_add(*x, m, y);
                }
            }
        };
        head.chunks_exact_mut(cols).for_each(step);
        tail.chunks_exact_mut(cols).for_each(step);
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant of a square matrix; the buffer is destroyed.
pub fn det_in_place(f: &FieldCtx, a: &mut [u64], n: usize) -> u64 {
    let mut det = 1;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a[i * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            swap_rows(a, n, c, pr);
            det = f.neg(det);
        }
        let pv = a[c * n + c];
        det = f.mul(det, pv);
        let inv = f.inv(pv);
        for i in c + 1..n {
            let v = a[i * n + c];
            if v != 0 {
                let m = f.neg(f.mul(v, inv));
                for j in c..n {
                    a[i * n + j] = f.mul_add(a[i * n + j], m, a[c * n + j]);
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn low_rank(
        f: &FieldCtx,
        rng: &mut ChaCha8Rng,
        rows: usize,
        cols: usize,
        r: usize,
    ) -> Vec<u64> {
        let a = f.random_vec(rng, rows * r);
        let b = f.random_vec(rng, r * cols);
        let mut m = vec![0; rows * cols];
        for i in 0..rows {
            for k in 0..r {
                for j in 0..cols {
                    m[i * cols + j] = f.mul_add(m[i * cols + j], a[i * r + k], b[k * cols + j]);
                }
            }
        }
        m
    }

    #[test]
    fn blocked_matches_plain_across_panels() {
        let f = FieldCtx::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(rows, cols, r) in &[
            (150, 200, 130),
            (300, 140, 139),
            (97, 97, 97),
            (200, 333, 5),
        ] {
            let m = low_rank(&f, &mut rng, rows, cols, r);
            let mut a = m.clone();
            let mut b = m.clone();
            assert_eq!(rank_blocked(&f, &mut a, rows, cols), r);
            assert_eq!(rank_plain(&f, &mut b, rows, cols), r);
        }
    }

    #[test]
    fn large_prime_paths_agree() {
        let f = FieldCtx::new(2147483647).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = low_rank(&f, &mut rng, 80, 90, 41);
        assert_eq!(rank_in_place(&f, &mut m.clone(), 80, 90), 41);
        let mut r = m.clone();
        assert_eq!(rref_in_place(&f, &mut r, 80, 90).len(), 41);
    }

    #[test]
    fn determinant_of_permutation() {
        let f = FieldCtx::new(101).unwrap();
        let mut a = vec![0, 1, 0, 1, 0, 0, 0, 0, 1];
        assert_eq!(det_in_place(&f, &mut a, 3), 100);
    }
}
