use alloc::vec::Vec;

use rand::Rng as _;

use super::{Assignment, Circuit, CircuitError, ModEval};
use crate::scalar::{Field, Scalar};
use crate::util::rng;

/// Default identity-testing modulus, 2^61 - 1.
pub const DEFAULT_PRIME: u64 = crate::scalar::MERSENNE_61;

/// Outcome of randomized identity testing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    /// All trials agreed.
    EqualWhp {
        /// Trials run.
        trials: usize,
    },
    /// A point where the two sides differ.
    Unequal {
        /// The witness point (integers for rational circuits).
        point: Assignment,
        /// First differing output.
        output: usize,
    },
}

impl IdentityVerdict {
    /// True for [`IdentityVerdict::EqualWhp`].
    pub fn is_equal(&self) -> bool {
        matches!(self, IdentityVerdict::EqualWhp { .. })
    }
}

/// The modulus identity tests run in for `field`: `prime` for the rationals,
/// the field's own modulus otherwise (`None` if it exceeds a machine word).
pub(crate) fn test_modulus(field: &Field, prime: u64) -> Option<u64> {
    match field {
        Field::Rationals => Some(prime),
        f => f.modulus_u64(),
    }
}

/// Compares two black boxes at `trials` random points mod `q`.
pub(crate) fn compare_mod(
    field: &Field,
    slots: usize,
    q: u64,
    trials: usize,
    seed: u64,
    mut lhs: impl FnMut(&[u64]) -> Vec<u64>,
    mut rhs: impl FnMut(&[u64]) -> Vec<u64>,
) -> IdentityVerdict {
    let mut g = rng(seed);
    for _ in 0..trials {
        let point: Vec<u64> = (0..slots).map(|_| g.gen_range(0..q)).collect();
        let (a, b) = (lhs(&point), rhs(&point));
        if let Some(i) = (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i)) {
            let values = point.iter().map(|&v| field.from_u64(v)).collect();
            return IdentityVerdict::Unequal {
                point: Assignment { values },
                output: i,
            };
        }
    }
    IdentityVerdict::EqualWhp { trials }
}

impl Circuit {
    /// Randomized identity test against `other` over GF(2^61 - 1) (rational
    /// circuits) or the circuits' own prime field.
    pub fn identity_test(
        &self,
        other: &Circuit,
        trials: usize,
        seed: u64,
    ) -> Result<IdentityVerdict, CircuitError> {
        self.identity_test_with_prime(other, trials, seed, DEFAULT_PRIME)
    }

    /// As [`Circuit::identity_test`] with an explicit prime for rational circuits.
    pub fn identity_test_with_prime(
        &self,
        other: &Circuit,
        trials: usize,
        seed: u64,
        prime: u64,
    ) -> Result<IdentityVerdict, CircuitError> {
        if self.field != other.field {
            return Err(CircuitError::Mismatch("different fields".into()));
        }
        if self.vars.x.len() != other.vars.x.len()
            || self.vars.y.len() != other.vars.y.len()
            || self.vars.z.len() != other.vars.z.len()
        {
            return Err(CircuitError::Mismatch("different variable sets".into()));
        }
        if self.outputs.len() != other.outputs.len() {
            return Err(CircuitError::Mismatch("different output counts".into()));
        }
        match test_modulus(&self.field, prime) {
            Some(q) => {
                let (a, b) = (ModEval::new(self, q)?, ModEval::new(other, q)?);
                Ok(compare_mod(
                    &self.field,
                    self.vars.total(),
                    q,
                    trials,
                    seed,
                    |p| a.eval(p),
                    |p| b.eval(p),
                ))
            }
            None => {
                let f = self.field.clone();
                let p = f.modulus().expect("prime field").clone();
                let mut g = rng(seed);
                for _ in 0..trials {
                    let values: Vec<Scalar> = (0..self.vars.total())
                        .map(|_| {
                            let words: Vec<u32> =
                                (0..p.to_u32_digits().len() + 1).map(|_| g.gen()).collect();
                            Scalar::Residue(num_bigint::BigUint::new(words) % &p)
                        })
                        .collect();
                    let a = Assignment { values };
                    let (l, r) = (self.evaluate(&a)?, other.evaluate(&a)?);
                    if let Some(i) = (0..l.len()).find(|&i| l[i] != r[i]) {
                        return Ok(IdentityVerdict::Unequal {
                            point: a,
                            output: i,
                        });
                    }
                }
                Ok(IdentityVerdict::EqualWhp { trials })
            }
        }
    }
}
