use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng as _;

use super::field::{Field, ScalarError, MERSENNE_61};
use super::matrix::{bareiss_det, det_mod, int_rows_mod, Matrix};
use crate::util::{binom, next_combination, random_subset, rng};

/// Outcome of a total-regularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TotalRegularity {
    /// Every square minor is nonsingular.
    Yes,
    /// A singular minor, 0-based row and column indices.
    No {
        /// Rows of the minor.
        rows: Vec<usize>,
        /// Columns of the minor.
        cols: Vec<usize>,
    },
    /// The budget was too small for exhaustive enumeration and sampling
    /// found no singular minor.
    BudgetExceeded {
        /// Number of minors sampled.
        tested: u64,
    },
}

enum Backing {
    Rational {
        ints: Vec<Vec<BigInt>>,
        fast: Vec<Vec<u64>>,
    },
    Word {
        rows: Vec<Vec<u64>>,
        q: u64,
    },
    Big,
}

impl Matrix {
    /// Number of square minors of an n x n matrix.
    pub fn minor_count(n: usize) -> u128 {
        (1..=n as u64)
            .map(|k| binom(n as u64, k).saturating_mul(binom(n as u64, k)))
            .sum()
    }

    /// Checks whether every square minor is nonsingular. Minors are visited
    /// by increasing size with lexicographic row and column subsets, so the
    /// witness is deterministic. When the minor count exceeds `budget`,
    /// `budget` random minors are tested instead.
    pub fn is_totally_regular(
        &self,
        budget: u64,
        seed: u64,
    ) -> Result<TotalRegularity, ScalarError> {
        if self.rows() != self.cols() {
            return Err(ScalarError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let n = self.rows();
        let backing = match self.field() {
            Field::Rationals => {
                let ints = self.integer_rows();
                let fast = int_rows_mod(&ints, MERSENNE_61);
                Backing::Rational { ints, fast }
            }
            f => match f.modulus_u64() {
                Some(q) => Backing::Word {
                    rows: self.reduce_mod(q).expect("residues"),
                    q,
                },
                None => Backing::Big,
            },
        };
        let singular = |r: &[usize], c: &[usize]| -> bool {
            match &backing {
                Backing::Rational { ints, fast } => {
                    let sub: Vec<Vec<u64>> = r
                        .iter()
                        .map(|&i| c.iter().map(|&j| fast[i][j]).collect())
                        .collect();
                    if det_mod(sub, MERSENNE_61) != 0 {
                        return false;
                    }
                    let sub: Vec<Vec<BigInt>> = r
                        .iter()
                        .map(|&i| c.iter().map(|&j| ints[i][j].clone()).collect())
                        .collect();
                    bareiss_det(sub) == BigInt::from(0)
                }
                Backing::Word { rows, q } => {
                    let sub: Vec<Vec<u64>> = r
                        .iter()
                        .map(|&i| c.iter().map(|&j| rows[i][j]).collect())
                        .collect();
                    det_mod(sub, *q) == 0
                }
                Backing::Big => self
                    .submatrix(r, c)
                    .determinant()
                    .map(|d| d.is_zero())
                    .unwrap_or(true),
            }
        };
        if Self::minor_count(n) <= budget as u128 {
            for k in 1..=n {
                let mut r: Vec<usize> = (0..k).collect();
                loop {
                    let mut c: Vec<usize> = (0..k).collect();
                    loop {
                        if singular(&r, &c) {
                            return Ok(TotalRegularity::No { rows: r, cols: c });
                        }
                        if !next_combination(&mut c, n) {
                            break;
                        }
                    }
                    if !next_combination(&mut r, n) {
                        break;
                    }
                }
            }
            return Ok(TotalRegularity::Yes);
        }
        let mut g = rng(seed);
        for _ in 0..budget {
            let k = g.gen_range(1..=n);
            let r = random_subset(&mut g, n, k);
            let c = random_subset(&mut g, n, k);
            if singular(&r, &c) {
                return Ok(TotalRegularity::No { rows: r, cols: c });
            }
        }
        Ok(TotalRegularity::BudgetExceeded { tested: budget })
    }
}
