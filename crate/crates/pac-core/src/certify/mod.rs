//! Executable lower-bound arguments: separator-plus-rank certificates for
//! bilinear forms, disjoint-path counts with matching cuts, multi-output
//! certificates and the explicit constants the arguments manipulate.

mod paths;
mod rank;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::circuit::CircuitError;
use crate::scalar::ScalarError;
use crate::separators::SeparatorError;

pub use paths::{
    max_disjoint_paths, multi_output_certificate, path_claim, DisjointPathResult, MultiOutputModel,
    MultiOutputReport, PartReport, PathClaimReport,
};
pub use rank::{
    rank_certificate_planar, rank_certificate_read_once, BilrankReport, ClassRank, ComponentClass,
    PipelineKind, RankCertificate, SplitReport, Verdict,
};

/// Errors from the certificate pipelines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    /// The circuit is not of the required kind.
    #[error("{0}")]
    Precondition(String),
    /// The circuit does not compute the supplied matrix.
    #[error("mismatch: {0}")]
    Mismatch(String),
    /// A circuit operation failed.
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    /// A separator routine failed.
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    /// Field arithmetic failed.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    /// Unknown model name.
    #[error("unknown model {0:?}")]
    UnknownModel(String),
}

/// Computation model of a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundModel {
    /// Planar circuits for a bilinear form.
    PlanarCircuit,
    /// Read-once planar circuits for a bilinear form.
    ReadOncePlanar,
    /// Planar algebraic branching programs.
    PlanarAbp,
    /// Multi-output planar circuits for a linear map.
    MultiOutputPlanar,
    /// Multi-output formulas for a linear map.
    MultiOutputFormula,
}

impl BoundModel {
    /// All models, in table order.
    pub const ALL: [BoundModel; 5] = [
        BoundModel::PlanarCircuit,
        BoundModel::ReadOncePlanar,
        BoundModel::PlanarAbp,
        BoundModel::MultiOutputPlanar,
        BoundModel::MultiOutputFormula,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            BoundModel::PlanarCircuit => "planar-circuit",
            BoundModel::ReadOncePlanar => "read-once-planar",
            BoundModel::PlanarAbp => "planar-abp",
            BoundModel::MultiOutputPlanar => "multi-output-planar",
            BoundModel::MultiOutputFormula => "multi-output-formula",
        }
    }
}

impl fmt::Display for BoundModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundModel {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CertifyError::UnknownModel(s.into()))
    }
}

/// Explicit bound for one model and size. Logarithms are base 2 rounded
/// down; fractional powers are rounded down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTable {
    /// Model.
    pub model: BoundModel,
    /// Input size.
    pub n: usize,
    /// Asymptotic statement, e.g. `n log n`.
    pub asymptotic: &'static str,
    /// The threshold or scale value at `n`.
    pub value: BigRational,
    /// True when the source states no explicit constant.
    pub asymptotic_only: bool,
    /// Other constants stated for the same argument, with labels.
    pub alternates: Vec<(&'static str, BigRational)>,
    /// Provenance remark.
    pub note: &'static str,
}

fn floor_log2(n: usize) -> u64 {
    u64::from(usize::BITS - 1 - n.leading_zeros())
}

/// Largest `r` with `r^3 <= v`.
fn icbrt(v: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 43);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if mid.checked_pow(3).is_some_and(|c| c <= v) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

fn ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The explicit thresholds the lower-bound arguments use, for annotating
/// reports. `n >= 2`.
pub fn paper_bound(model: BoundModel, n: usize) -> Result<BoundTable, CertifyError> {
    if n < 2 {
        return Err(CertifyError::Precondition("bounds need n >= 2".into()));
    }
    let lg = u128::from(floor_log2(n));
    let nn = n as u128;
    let t = match model {
        BoundModel::PlanarCircuit => BoundTable {
            model,
            n,
            asymptotic: "n log n",
            value: ratio(nn * lg, 60000),
            asymptotic_only: false,
            alternates: alloc::vec![("concluding constant", ratio(nn * lg, 2000))],
            note: "the argument assumes size at most n log n / 60000 but concludes size at least n log n / 2000; \
                   the two constants disagree",
        },
        BoundModel::ReadOncePlanar => BoundTable {
            model,
            n,
            asymptotic: "n^2",
            value: ratio(nn, 13),
            asymptotic_only: false,
            alternates: Vec::new(),
            note: "size of the surviving variable sets on each side; the quadratic bound has no explicit constant",
        },
        BoundModel::PlanarAbp => BoundTable {
            model,
            n,
            asymptotic: "n log n",
            value: ratio(nn * lg, 1),
            asymptotic_only: true,
            alternates: Vec::new(),
            note: "scale only",
        },
        BoundModel::MultiOutputPlanar => BoundTable {
            model,
            n,
            asymptotic: "n^(4/3)",
            value: ratio(icbrt(nn.pow(4)), 1),
            asymptotic_only: true,
            alternates: Vec::new(),
            note: "scale only",
        },
        BoundModel::MultiOutputFormula => BoundTable {
            model,
            n,
            asymptotic: "n^2 / log n",
            value: ratio(nn * nn, lg),
            asymptotic_only: true,
            alternates: Vec::new(),
            note: "scale only",
        },
    };
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_constants() {
        let t = paper_bound(BoundModel::PlanarCircuit, 1024).unwrap();
        assert_eq!(t.value, ratio(10240, 60000));
        assert_eq!(t.alternates[0].1, ratio(10240, 2000));
        assert!(!t.asymptotic_only);
    }

    #[test]
    fn other_models() {
        assert_eq!(
            paper_bound(BoundModel::ReadOncePlanar, 26).unwrap().value,
            ratio(2, 1)
        );
        let t = paper_bound(BoundModel::MultiOutputPlanar, 8).unwrap();
        assert_eq!(t.value, ratio(16, 1));
        assert!(t.asymptotic_only);
        assert_eq!(
            paper_bound(BoundModel::MultiOutputFormula, 16)
                .unwrap()
                .value,
            ratio(64, 1)
        );
        assert!(paper_bound(BoundModel::PlanarAbp, 1).is_err());
        assert!("planar-dag".parse::<BoundModel>().is_err());
        for m in BoundModel::ALL {
            assert_eq!(m.name().parse::<BoundModel>().unwrap(), m);
        }
    }

    #[test]
    fn cube_roots() {
        for v in [0u128, 1, 7, 8, 26, 27, 1 << 40, 999_999_999_999] {
            let r = icbrt(v);
            assert!(r * r * r <= v && (r + 1).pow(3) > v);
        }
    }
}
