//! Planar and forest separators: weighted Lipton-Tarjan, labelled
//! two-colour partitions, p-way partitions and forest partition trees.
//! Every result is re-verified by graph search before it is returned.

mod forest;
mod lt;
mod tree;
mod turan;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::planar::{GraphError, UGraph};

pub use forest::forest_separator;
pub use lt::{lipton_tarjan, uniform_weights};
pub use tree::{
    forest_partition_tree, savage_partition, MultiPartitionResult, PartitionNode, PartitionTree,
};
pub use turan::{turan_partition, ComponentCensus, Label, LabeledPartitionResult, TuranStrategy};

/// Errors from the separator algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparatorError {
    /// The graph is not planar.
    #[error("graph is not planar")]
    NonPlanar,
    /// A forest was required.
    #[error("graph contains a cycle")]
    Cyclic,
    /// Weight vector length differs from the vertex count.
    #[error("expected {expected} weights, found {found}")]
    WeightCount {
        /// Vertex count.
        expected: usize,
        /// Supplied weights.
        found: usize,
    },
    /// A negative weight.
    #[error("weight of vertex {0} is negative")]
    NegativeWeight(usize),
    /// Weights sum to more than one.
    #[error("weights sum to more than 1")]
    WeightSum,
    /// Common denominator too large for exact integer sums.
    #[error("weights need a common denominator beyond 2^120")]
    WeightPrecision,
    /// A vertex id out of range.
    #[error("vertex {0} is out of range")]
    Vertex(usize),
    /// Part count outside `1..=|V'|`.
    #[error("part count {p} outside 1..={max}")]
    PartCount {
        /// Requested parts.
        p: usize,
        /// Size of the distinguished subset.
        max: usize,
    },
    /// A label occurs more often than allowed.
    #[error("label {label:?} occurs {count} times, more than {k}")]
    Occurrences {
        /// The label.
        label: Label,
        /// Its occurrence count.
        count: usize,
        /// The allowed maximum.
        k: usize,
    },
    /// A guaranteed bound failed; indicates a bug.
    #[error("bound violated: {0}")]
    Bound(String),
}

impl From<GraphError> for SeparatorError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Cyclic => SeparatorError::Cyclic,
            GraphError::OutOfRange(v) => SeparatorError::Vertex(v),
            other => SeparatorError::Bound(alloc::format!("{other}")),
        }
    }
}

/// A vertex partition `(A, B, C)` where `C` separates `A` from `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorResult {
    /// First side, sorted.
    pub a: Vec<usize>,
    /// Second side, sorted.
    pub b: Vec<usize>,
    /// Separator, sorted.
    pub c: Vec<usize>,
    /// Weight of `A`.
    pub weight_a: BigRational,
    /// Weight of `B`.
    pub weight_b: BigRational,
    /// Total weight of all vertices.
    pub total_weight: BigRational,
    /// Claimed bound on `|C|^2` (`8|V|` for planar graphs, `9` for forests).
    pub claimed_sq: u128,
}

impl SeparatorResult {
    /// Whether `|C|^2` is within the claimed bound.
    pub fn within_bound(&self) -> bool {
        (self.c.len() as u128).pow(2) <= self.claimed_sq
    }

    /// Whether both sides carry at most two thirds of the total weight.
    pub fn balanced(&self) -> bool {
        let two_thirds = &self.total_weight * BigRational::new(2.into(), 3.into());
        self.weight_a <= two_thirds && self.weight_b <= two_thirds
    }

    /// Re-checks by graph search that no edge joins `A` and `B` and that
    /// the three sets partition the vertices.
    pub fn separates(&self, g: &UGraph) -> bool {
        let mut side = vec![u8::MAX; g.n()];
        for (s, set) in [(SIDE_A, &self.a), (SIDE_B, &self.b), (SIDE_C, &self.c)] {
            for &v in set.iter() {
                if v >= g.n() || side[v] != u8::MAX {
                    return false;
                }
                side[v] = s;
            }
        }
        side.iter().all(|&s| s != u8::MAX) && no_cross_edge(g, &side)
    }
}

pub(crate) const SIDE_A: u8 = 0;
pub(crate) const SIDE_B: u8 = 1;
pub(crate) const SIDE_C: u8 = 2;

fn no_cross_edge(g: &UGraph, side: &[u8]) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| side[u] == SIDE_C || side[v] == SIDE_C || side[u] == side[v])
}

/// Whether, after deleting `cut`, no vertex of `inside` (outside `cut`) is
/// connected to a vertex outside `inside` and `cut`.
pub fn separates_subset(g: &UGraph, inside: &[bool], cut: &[bool]) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| cut[u] || cut[v] || inside[u] == inside[v])
}

pub(crate) fn ratio(num: u128, den: u128) -> BigRational {
    if den == 0 {
        return BigRational::from_integer(BigInt::from(0));
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn mask(n: usize, set: &[usize]) -> Result<Vec<bool>, SeparatorError> {
    let mut m = vec![false; n];
    for &v in set {
        *m.get_mut(v).ok_or(SeparatorError::Vertex(v))? = true;
    }
    Ok(m)
}

/// Ceiling of `log_{3/2} x` for `x >= 1`, by exact integer comparison.
pub fn ceil_log_three_halves(x: usize) -> usize {
    let (mut num, mut den, mut k) = (BigUint::from(1u8), BigUint::from(1u8), 0usize);
    let x = BigUint::from(x);
    while num < &den * &x {
        num *= 3u8;
        den *= 2u8;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_three_halves() {
        assert_eq!(ceil_log_three_halves(1), 0);
        assert_eq!(ceil_log_three_halves(2), 2);
        assert_eq!(ceil_log_three_halves(27), 9);
        // (3/2)^9 = 38.44
        assert_eq!(ceil_log_three_halves(38), 9);
        assert_eq!(ceil_log_three_halves(39), 10);
    }
}
