//! Planar arithmetic circuits.
//!
//! Exact field arithmetic and linear algebra, a circuit and branching-program
//! IR, planarity testing and planarization, circuit transforms (degree
//! reduction, crossover planarization, bilinearization, ABP conversion,
//! reverse-mode derivatives), planar and forest separators, explicit
//! generators (Cauchy matrices, superconcentrators, power sums) and the
//! separator-plus-rank certificates that tie them together.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod certify;
pub mod circuit;
pub mod constructions;
pub mod planar;
pub mod scalar;
pub mod separators;
pub mod transforms;

mod flow;
mod util;

pub use circuit::{Abp, Assignment, Circuit, GateId, GateKind, Var, VarKind};
pub use planar::{Drawing, RotationSystem, UGraph};
pub use scalar::{Field, Matrix, Scalar};
