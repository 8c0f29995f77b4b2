use proptest::prelude::*;

use rfk_core::exact_linalg::{cohomology_at, invert, kernel_basis, nullity, rank, solve, SparseMatrix};
use rfk_core::{Field, Rat};

// Dense fraction Gauss over Q, kept apart from the sparse eliminator.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].div(&m[r][c]).unwrap();
                for j in 0..ncols {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        r += 1;
    }
    r
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
}

// Every minor of a 6x6 matrix with entries in [-2, 2] is below 6! * 2^6,
// so these primes never divide a nonzero minor.
const PRIMES: [u64; 3] = [1_000_003, 998_244_353, 2_147_483_647];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_matches_dense_oracle(rows in matrix()) {
        let m = SparseMatrix::from_ints(Field::Rational, &rows);
        prop_assert_eq!(rank(&m), oracle_rank(&rows));
    }

    #[test]
    fn rank_of_transpose(rows in matrix()) {
        for f in [Field::Rational, Field::Prime(3)] {
            let m = SparseMatrix::from_ints(f, &rows);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn rank_nullity(rows in matrix()) {
        for f in [Field::Rational, Field::Prime(2), Field::Prime(5)] {
            let m = SparseMatrix::from_ints(f, &rows);
            prop_assert_eq!(rank(&m) + nullity(&m), m.ncols());
            let ker = kernel_basis(&m);
            prop_assert_eq!(ker.len(), nullity(&m));
            for v in &ker {
                prop_assert!(m.apply(v).unwrap().iter().all(|x| f.is_zero(x)));
            }
        }
    }

    #[test]
    fn cohomology_agrees_over_large_primes(a in matrix(), seed in 0u64..1000) {
        // d_out d_in = 0 by taking d_in to span part of ker d_out
        let f = Field::Rational;
        let d_out = SparseMatrix::from_ints(f, &a);
        let ker = kernel_basis(&d_out);
        let take = (seed as usize) % (ker.len() + 1);
        let d_in = SparseMatrix::from_columns(f, d_out.ncols(), &ker[..take]);
        let q = cohomology_at(&d_in, &d_out).unwrap().dim;
        prop_assert_eq!(q, d_out.ncols() - rank(&d_out) - take);
        for p in PRIMES {
            let hp = cohomology_at(&d_in.reduce_mod(p).unwrap(), &d_out.reduce_mod(p).unwrap()).unwrap().dim;
            prop_assert_eq!(hp, q, "p = {}", p);
        }
    }

    #[test]
    fn solve_finds_preimages(rows in matrix(), xs in prop::collection::vec(-3i64..=3, 6)) {
        let f = Field::Rational;
        let m = SparseMatrix::from_ints(f, &rows);
        let x: Vec<_> = xs[..m.ncols()].iter().map(|&v| f.from_int(v)).collect();
        let b = m.apply(&x).unwrap();
        let y = solve(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.apply(&y).unwrap(), b);
    }
}

#[test]
fn inverse_of_unimodular() {
    let f = Field::Rational;
    let m = SparseMatrix::from_ints(f, &[vec![2, 1], vec![1, 1]]);
    let inv = invert(&m).unwrap();
    assert_eq!(inv.to_dense(), SparseMatrix::from_ints(f, &[vec![1, -1], vec![-1, 2]]).to_dense());
    assert!(invert(&SparseMatrix::from_ints(f, &[vec![2, 4], vec![1, 2]])).is_none());
    // singular only in characteristic 3
    let m = SparseMatrix::from_ints(Field::Prime(3), &[vec![2, 1], vec![1, 2]]);
    assert!(invert(&m).is_none());
}

#[test]
fn shape_mismatch_is_an_error() {
    let f = Field::Rational;
    let a = SparseMatrix::zeros(f, 2, 3);
    assert!(a.mul(&a).is_err());
    assert!(cohomology_at(&SparseMatrix::zeros(f, 2, 1), &SparseMatrix::zeros(f, 1, 3)).is_err());
}

#[test]
fn empty_matrices() {
    let f = Field::Rational;
    let z = SparseMatrix::zeros(f, 0, 4);
    assert_eq!(rank(&z), 0);
    assert_eq!(nullity(&z), 4);
    let h = cohomology_at(&SparseMatrix::zeros(f, 0, 0), &SparseMatrix::zeros(f, 0, 0)).unwrap();
    assert_eq!(h.dim, 0);
}
