//! Randomized properties of the integer linear algebra layer.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toric_exc::lattice::{
    integer_kernel, right_inverse, smith_normal_form, solve_rational, IntMatrix,
};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-20i64..=20, rows * cols).prop_map(move |vals| {
        IntMatrix::from_rows_i64(&vals.chunks(cols).map(|c| c.to_vec()).collect::<Vec<_>>())
    })
}

proptest! {
    #[test]
    fn snf_factorization_holds(a in small_matrix(3, 5)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.determinant().abs(), BigInt::one());
        prop_assert_eq!(snf.v.determinant().abs(), BigInt::one());
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v).rows_vec(), snf.s.rows_vec());
    }

    #[test]
    fn snf_rank_matches_nonzero_invariants(a in small_matrix(4, 4)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.invariant_factors().len(), a.rank());
    }

    #[test]
    fn left_kernel_annihilates(a in small_matrix(6, 3)) {
        let k = integer_kernel(&a);
        prop_assert_eq!(k.nrows(), 6 - a.rank());
        prop_assert!(k.mul(&a).is_zero());
    }

    #[test]
    fn rational_solve_roundtrip(a in small_matrix(4, 4), x in proptest::collection::vec(-9i64..=9, 4)) {
        let xv: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let b = a.mul_vec(&xv);
        if let Some(sol) = solve_rational(&a, &b) {
            // A * sol must reproduce b exactly.
            for i in 0..4 {
                let got: num_rational::BigRational = (0..4)
                    .map(|j| {
                        num_rational::BigRational::from_integer(a.get(i, j).clone()) * &sol[j]
                    })
                    .sum();
                prop_assert_eq!(got, num_rational::BigRational::from_integer(b[i].clone()));
            }
        } else {
            // b = A x is consistent, so a full-rank system must be solved.
            prop_assert!(a.rank() < 4);
        }
    }

    #[test]
    fn right_inverse_is_right_inverse(a in small_matrix(2, 5)) {
        if let Some(r) = right_inverse(&a) {
            let prod = a.mul(&r);
            prop_assert_eq!(prod.rows_vec(), IntMatrix::identity(2).rows_vec());
        }
    }
}
