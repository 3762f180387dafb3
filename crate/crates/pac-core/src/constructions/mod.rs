//! Explicit generators: Cauchy matrices, power sums, superconcentrators and
//! the circuits and programs built from them.

use alloc::string::String;

use crate::circuit::CircuitError;
use crate::scalar::ScalarError;

mod explicit;
mod random;
mod sc;

pub use explicit::{
    cauchy_matrix, grid_bilinear_circuit, naive_bilinear_circuit, power_sum_bound,
    power_sum_circuit, standard_cauchy,
};
pub use random::{random_abp, random_circuit, random_planar_abp, random_planar_bilinear};
pub use sc::{
    abp_from_superconcentrator, assign_strassen_weights, benor_circuit,
    bilinear_formula_from_depth2, sc_complete, sc_depth2, sc_pair_count, sc_recursive,
    verify_superconcentrator, BilinearFormula, SCGraph, ScVerdict, StrassenConfig, StrassenWeights,
};

/// Errors from the generators.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    /// Two parameters (by position in `xs ++ ys`) coincide.
    #[error("parameters {0} and {1} coincide")]
    RepeatedParameter(usize, usize),
    /// `xs[i] - ys[j]` vanishes.
    #[error("x{} - y{} is zero", .0 + 1, .1 + 1)]
    ZeroDifference(usize, usize),
    /// A size or shape parameter is out of range.
    #[error("{0}")]
    Parameter(String),
    /// The graph does not have the required depth.
    #[error("expected depth {expected}, found {found}")]
    Depth {
        /// Required depth.
        expected: usize,
        /// Actual depth.
        found: usize,
    },
    /// Random weights never produced a totally regular matrix.
    #[error("no totally regular weighting after {0} attempts")]
    RetriesExhausted(usize),
    /// Scalar failure.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    /// Circuit failure.
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}
