mod common;

use codiff_core::catalog;
use codiff_core::hochschild::{coboundary_matrix, cohomology, CochainBasis};
use codiff_core::linalg::{inverse, nullspace, rank, rref, sparse_from_dense, ExactMatrix, Subspace};
use codiff_core::Scalar;
use common::small_scalar;
use proptest::prelude::*;

/// Dense Gaussian elimination, kept separate from the library's sparse
/// echelon code.
fn oracle_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in c..ncols {
                    let x = &a[r][j] * &f;
                    a[i][j] -= &x;
                }
            }
        }
        r += 1;
    }
    r
}

fn matrix() -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(small_scalar(), c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let m = ExactMatrix::from_dense(&m).unwrap();
        let r = rref(&m);
        prop_assert_eq!(rref(&r.matrix), r);
    }

    #[test]
    fn rank_matches_dense_oracle(m in matrix()) {
        let e = ExactMatrix::from_dense(&m).unwrap();
        prop_assert_eq!(rank(&e), oracle_rank(&m));
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let e = ExactMatrix::from_dense(&m).unwrap();
        let ns = nullspace(&e);
        prop_assert_eq!(rank(&e) + ns.dim(), e.cols());
        for v in ns.basis() {
            prop_assert!(e.mul_sparse(&v).is_empty());
        }
    }

    #[test]
    fn reduce_mod_is_canonical(m in matrix(), coeffs in proptest::collection::vec(small_scalar(), 6), x in proptest::collection::vec(small_scalar(), 6)) {
        let n = m[0].len();
        let s = Subspace::span(n, m.iter().map(|r| sparse_from_dense(r)));
        let mut b = vec![Scalar::zero(); n];
        for (row, c) in m.iter().zip(&coeffs) {
            for (bj, rj) in b.iter_mut().zip(row) {
                *bj += &(rj * c);
            }
        }
        let x: Vec<Scalar> = x[..n].to_vec();
        let xb: Vec<Scalar> = x.iter().zip(&b).map(|(a, c)| a + c).collect();
        prop_assert_eq!(s.reduce_mod_dense(&x).unwrap(), s.reduce_mod_dense(&xb).unwrap());
        prop_assert!(s.contains(&sparse_from_dense(&b)));
    }

    #[test]
    fn inverse_when_invertible(m in (1usize..5).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(small_scalar(), n), n))) {
        let e = ExactMatrix::from_dense(&m).unwrap();
        match inverse(&e) {
            Some(inv) => prop_assert_eq!(e.mul(&inv).unwrap(), ExactMatrix::identity(m.len())),
            None => prop_assert!(rank(&e) < m.len()),
        }
    }
}

#[test]
fn d25_first_coboundary_rank_by_oracle() {
    let d = catalog::codifferential(25).unwrap();
    let m = coboundary_matrix(&d, 1).unwrap();
    let r = oracle_rank(&m.to_dense());
    assert_eq!(r, rank(&m));
    let c1 = CochainBasis::new(d.space(), 1).len();
    let d0 = coboundary_matrix(&d, 0).unwrap();
    // h^1 = dim Z^1 - dim B^1 = (dim C^1 - rank D_1) - rank D_0
    let h1 = c1 - r - oracle_rank(&d0.to_dense());
    assert_eq!(h1, 4);
    let rep = cohomology(&d, 1).unwrap();
    assert_eq!(rep.even_dim + rep.odd_dim, h1);
}
