use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pac_core::scalar::{Field, Matrix, Scalar, TotalRegularity};
use proptest::prelude::*;

/// Reference rank and determinant by plain fraction elimination.
fn naive(rows: &[Vec<i64>]) -> (usize, BigRational) {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    let mut det = BigRational::one();
    for col in 0..m {
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            det = BigRational::zero();
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            det = -det;
        }
        det *= a[rank][col].clone();
        for r in rank + 1..n {
            let f = &a[r][col] / &a[rank][col];
            for c in col..m {
                let v = &a[rank][c] * &f;
                a[r][c] -= v;
            }
        }
        rank += 1;
    }
    if rank < n {
        det = BigRational::zero();
    }
    (rank, det)
}

fn to_matrix(field: &Field, rows: &[Vec<i64>]) -> Matrix {
    let cols = rows.first().map_or(0, Vec::len);
    Matrix::from_fn(field.clone(), rows.len(), cols, |i, j| {
        field.from_i64(rows[i][j])
    })
}

fn int_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-30i64..=30, n), n))
}

proptest! {
    #[test]
    fn rank_matches_fraction_oracle(rows in int_matrix(6)) {
        let m = to_matrix(&Field::Rationals, &rows);
        prop_assert_eq!(m.rank(), naive(&rows).0);
        prop_assert!(m.rank() <= m.rows().min(m.cols()));
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn determinant_matches_fraction_oracle(rows in square_matrix(6)) {
        let m = to_matrix(&Field::Rationals, &rows);
        prop_assert_eq!(m.determinant().unwrap(), Scalar::Rational(naive(&rows).1));
    }

    #[test]
    fn rank_is_subadditive(a in square_matrix(5), shift in 0usize..4) {
        let n = a.len();
        let b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| a[(i + shift) % n][j] - (i as i64)).collect()).collect();
        let (ma, mb) = (to_matrix(&Field::Rationals, &a), to_matrix(&Field::Rationals, &b));
        prop_assert!(ma.add(&mb).unwrap().rank() <= ma.rank() + mb.rank());
    }

    #[test]
    fn modular_determinant_is_rational_reduced(rows in square_matrix(6)) {
        let p = 1_000_003u64;
        let gf = Field::prime_u64(p).unwrap();
        let over_q = to_matrix(&Field::Rationals, &rows).determinant().unwrap();
        let over_p = to_matrix(&gf, &rows).determinant().unwrap();
        prop_assert_eq!(gf.from_u64(Field::Rationals.residue_mod(&over_q, p).unwrap()), over_p);
    }

    #[test]
    fn text_format_round_trips(rows in int_matrix(5), den in 1i64..9) {
        let f = Field::Rationals;
        let m = Matrix::from_fn(f.clone(), rows.len(), rows[0].len(), |i, j| {
            f.from_ratio(&BigInt::from(rows[i][j]), &BigInt::from(den)).unwrap()
        });
        prop_assert_eq!(Matrix::parse_text(&m.to_text()).unwrap(), m);
    }
}

#[test]
fn rational_rank_examples() {
    let f = Field::Rationals;
    let cauchy = Matrix::from_fn(f.clone(), 3, 3, |i, j| {
        f.inv(&f.from_i64([1, 2, 3][i] - [4, 5, 6][j])).unwrap()
    });
    assert_eq!(cauchy.rank(), 3);
}

#[test]
fn cauchy_matrices_up_to_six_are_totally_regular() {
    let f = Field::Rationals;
    for n in 1..=6usize {
        let m = Matrix::from_fn(f.clone(), n, n, |i, j| {
            f.inv(&f.from_i64(3 * i as i64 + 1 - (2 * j as i64 + 100)))
                .unwrap()
        });
        let budget = Matrix::minor_count(n) as u64;
        assert_eq!(
            m.is_totally_regular(budget, 1).unwrap(),
            TotalRegularity::Yes
        );
    }
}
