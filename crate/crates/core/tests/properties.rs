//! Property tests of the exact algebra against naive oracles written here.

use proptest::prelude::*;

use k3g16::chow::PFClass;
use k3g16::ffla::{FieldCtx, FqMatrix, Subspace};
use k3g16::mpoly::{interpolate, BinaryForm, MPoly, Macaulay, MonomialBasis};
use k3g16::multilinear::{wedge2, Trivector};
use k3g16::trivector::pfaffian;

const PRIMES: [u64; 5] = [5, 7, 101, 65537, (1 << 61) - 1];

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

/// Textbook Gaussian elimination with Fermat inverses.
fn oracle_rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = powm(m[rank][c], p - 2, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let k = mulm(row[c], inv, p);
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - mulm(k, y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by Leibniz expansion, for tiny matrices.
fn oracle_det(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut acc = 0u64;
    for j in 0..n {
        let minor: Vec<Vec<u64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = mulm(m[0][j], oracle_det(&minor, p), p);
        acc = if j % 2 == 0 {
            (acc + term) % p
        } else {
            (acc + p - term) % p
        };
    }
    acc
}

/// Matrices of small rank are common when entries are drawn from a short
/// range and rows are repeated.
fn matrix(p: u64, max: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![0..3u64, 0..p], c), r).prop_map(
            |mut rows| {
                if rows.len() > 2 {
                    let last = rows.len() - 1;
                    rows[last] = rows[0].clone();
                }
                rows
            },
        )
    })
}

fn with_prime<T: std::fmt::Debug, S: Strategy<Value = T>>(
    f: impl Fn(u64) -> S,
) -> impl Strategy<Value = (u64, T)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(move |p| (Just(p), f(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_oracle((p, rows) in with_prime(|p| matrix(p, 9))) {
        let f = FieldCtx::new(p).unwrap();
        let m = FqMatrix::from_rows(&rows);
        prop_assert_eq!(m.rank(&f), oracle_rank(&rows, p));
        prop_assert_eq!(m.transpose().rank(&f), m.rank(&f));
    }

    #[test]
    fn kernel_is_the_null_space((p, rows) in with_prime(|p| matrix(p, 9))) {
        let f = FieldCtx::new(p).unwrap();
        let m = FqMatrix::from_rows(&rows);
        let k = m.kernel(&f);
        prop_assert_eq!(k.dim() + m.rank(&f), m.cols);
        for v in k.vectors() {
            prop_assert!(m.mul_vec(&f, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn det_matches_leibniz((p, rows) in with_prime(|p| (1..=5usize).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..p, n), n)))) {
        let f = FieldCtx::new(p).unwrap();
        let m = FqMatrix::from_rows(&rows);
        prop_assert_eq!(m.det(&f), oracle_det(&rows, p));
        if let Some(inv) = m.inverse(&f) {
            prop_assert_eq!(m.mul(&f, &inv), FqMatrix::identity(rows.len()));
        } else {
            prop_assert_eq!(m.det(&f), 0);
        }
    }

    #[test]
    fn subspace_dimension_formula((p, a, b) in prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (Just(p), matrix(p, 6).prop_map(|m| m.into_iter().map(|r| { let mut r = r; r.resize(6, 0); r }).collect::<Vec<_>>()), matrix(p, 6).prop_map(|m| m.into_iter().map(|r| { let mut r = r; r.resize(6, 0); r }).collect::<Vec<_>>())))) {
        let f = FieldCtx::new(p).unwrap();
        let u = Subspace::span(&f, 6, &a);
        let w = Subspace::span(&f, 6, &b);
        let s = u.sum(&f, &w);
        let i = u.intersect(&f, &w);
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(s.contains_space(&f, &u) && u.contains_space(&f, &i) && w.contains_space(&f, &i));
        prop_assert_eq!(u.annihilator(&f).dim(), 6 - u.dim());
        // canonical form: the same span from the echelon vectors
        prop_assert_eq!(Subspace::span(&f, 6, &u.vectors()), u);
    }

    #[test]
    fn field_inverse_and_sqrt((p, a) in with_prime(|p| 1..p)) {
        let f = FieldCtx::new(p).unwrap();
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        let sq = f.mul(a, a);
        let r = f.sqrt(sq).unwrap();
        prop_assert_eq!(f.mul(r, r), sq);
        prop_assert_eq!(f.legendre(sq), 1);
    }

    #[test]
    fn polynomial_product_evaluates_pointwise(seed in any::<u64>(), da in 0..4u32, db in 0..4u32) {
        use rand::SeedableRng;
        let f = FieldCtx::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ba = MonomialBasis::new(3, da as usize);
        let bb = MonomialBasis::new(3, db as usize);
        let a = MPoly::from_dense(&ba, &f.random_vec(&mut rng, ba.len()));
        let b = MPoly::from_dense(&bb, &f.random_vec(&mut rng, bb.len()));
        let x = f.random_vec(&mut rng, 3);
        prop_assert_eq!(a.mul(&f, &b).evaluate(&f, &x), f.mul(a.evaluate(&f, &x), b.evaluate(&f, &x)));
        // Euler: sum x_i d_i a = deg(a) a
        let euler = a.gradient(&f).iter().enumerate().fold(0, |acc, (i, g)| f.mul_add(acc, x[i], g.evaluate(&f, &x)));
        prop_assert_eq!(euler, f.mul(da as u64 % 101, a.evaluate(&f, &x)));
    }

    #[test]
    fn interpolation_round_trip(seed in any::<u64>(), d in 1..5usize) {
        use rand::SeedableRng;
        let f = FieldCtx::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b = MonomialBasis::new(4, d);
        let poly = MPoly::from_dense(&b, &f.random_vec(&mut rng, b.len()));
        let samples: Vec<(Vec<u64>, u64)> = (0..b.len() + 20)
            .map(|_| {
                let x = f.random_vec(&mut rng, 4);
                let v = poly.evaluate(&f, &x);
                (x, v)
            })
            .collect();
        prop_assert_eq!(interpolate(&f, 4, d, &samples).unwrap(), poly);
    }

    #[test]
    fn binary_form_roots_are_zeros(roots in prop::collection::vec((0..101u64, 0..101u64), 1..6)) {
        use rand::SeedableRng;
        // product of linear forms t_k s - s_k t, built directly
        let f = FieldCtx::new(101).unwrap();
        let roots: Vec<(u64, u64)> = roots.into_iter().map(|(s, t)| if s == 0 && t == 0 { (1, 0) } else { (s, t) }).collect();
        let mut c = vec![1u64];
        for &(s, t) in &roots {
            let mut next = vec![0u64; c.len() + 1];
            for (i, &x) in c.iter().enumerate() {
                next[i] = f.add(next[i], f.mul(x, t));
                next[i + 1] = f.sub(next[i + 1], f.mul(x, s));
            }
            c = next;
        }
        let form = BinaryForm::new(c);
        for &(s, t) in &roots {
            prop_assert_eq!(form.eval(&f, s, t), 0);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rep = form.roots(&f, &mut rng).unwrap();
        prop_assert_eq!(rep.total(), roots.len());
        for (s, t) in rep.rational() {
            prop_assert_eq!(form.eval(&f, s, t), 0);
        }
    }

    #[test]
    fn contraction_kills_its_vector(seed in any::<u64>()) {
        use rand::SeedableRng;
        let f = FieldCtx::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t = Trivector::from_coeffs(10, f.random_vec(&mut rng, 120), false);
        let v = f.random_vec(&mut rng, 10);
        let w = f.random_vec(&mut rng, 10);
        let m = t.contract(&f, &v);
        prop_assert!(m.is_skew(&f));
        prop_assert!(m.mul_vec(&f, &v).iter().all(|&x| x == 0));
        prop_assert_eq!(t.eval3(&f, &v, &w, &v), 0);
        prop_assert_eq!(t.eval3(&f, &v, &w, &w), 0);
        prop_assert_eq!(t.eval3(&f, &w, &v, &v), 0);
        prop_assert_eq!(f.neg(t.eval3(&f, &v, &w, &m.col(0))), t.eval3(&f, &w, &v, &m.col(0)));
        // rank of a skew matrix is even
        prop_assert_eq!(m.rank(&f) % 2, 0);
    }

    #[test]
    fn pfaffian_squares_to_det(seed in any::<u64>(), half in 1..4usize) {
        use rand::SeedableRng;
        let f = FieldCtx::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 2 * half;
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x = f.random(&mut rng);
                m.set(i, j, x);
                m.set(j, i, f.neg(x));
            }
        }
        let pf = pfaffian(&f, &m);
        prop_assert_eq!(f.mul(pf, pf), m.det(&f));
    }

    #[test]
    fn wedge_is_alternating(seed in any::<u64>()) {
        use rand::SeedableRng;
        let f = FieldCtx::new(101).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_vec(&mut rng, 10);
        let b = f.random_vec(&mut rng, 10);
        let ab = wedge2(&f, &a, &b);
        let ba = wedge2(&f, &b, &a);
        prop_assert!(ab.iter().zip(&ba).all(|(&x, &y)| f.add(x, y) == 0));
        prop_assert!(wedge2(&f, &a, &a).iter().all(|&x| x == 0));
    }

    #[test]
    fn chow_ring_axioms(a in prop::array::uniform6(-20i64..20), b in prop::array::uniform6(-20i64..20), c in prop::array::uniform6(-20i64..20)) {
        let (a, b, c) = (PFClass(a), PFClass(b), PFClass(c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * (b + c), a * b + a * c);
        let u = PFClass::one() + a - a.graded(0);
        prop_assert_eq!(u * u.inverse_unipotent(), PFClass::one());
    }
}

/// Points of `P^3` in general position cut out a scheme of degree equal to
/// their number.
#[test]
fn degree_of_random_points() {
    use rand::SeedableRng;
    let f = FieldCtx::new(101).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for k in [1usize, 4, 7, 11] {
        let pts: Vec<Vec<u64>> = (0..k).map(|_| f.random_point(&mut rng, 4)).collect();
        let gens = k3g16::mpoly::vanishing_forms(&f, 4, 3, &pts);
        let plateau = Macaulay::new(1).zero_dim_degree(&f, &gens, 20).unwrap();
        assert_eq!(plateau.degree, k);
    }
}

/// A complete intersection of three quadrics in `P^3` has degree 8.
#[test]
fn degree_of_complete_intersection() {
    use rand::SeedableRng;
    let f = FieldCtx::new(101).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let b = MonomialBasis::new(4, 2);
    let gens: Vec<MPoly> = (0..3)
        .map(|_| MPoly::from_dense(&b, &f.random_vec(&mut rng, b.len())))
        .collect();
    assert_eq!(
        Macaulay::new(2)
            .zero_dim_degree(&f, &gens, 20)
            .unwrap()
            .degree,
        8
    );
}
