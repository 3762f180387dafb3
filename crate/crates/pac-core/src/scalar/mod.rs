//! Exact field arithmetic and dense linear algebra.

mod field;
mod matrix;
mod prime;
mod regular;

pub use field::{Field, Scalar, ScalarError, MERSENNE_61};
pub use matrix::Matrix;
pub use prime::is_probable_prime;
pub use regular::TotalRegularity;
