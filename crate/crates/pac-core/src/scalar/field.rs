use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::is_probable_prime;

/// Errors from scalar and matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    /// The requested modulus failed the primality test.
    #[error("modulus {0} is not prime")]
    NotPrime(String),
    /// GF(2) is not supported.
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    /// A square matrix was required.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare {
        /// Row count.
        rows: usize,
        /// Column count.
        cols: usize,
    },
    /// Entry count or dimensions disagree.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A scalar from another field was supplied.
    #[error("scalar {scalar} is not an element of {field}")]
    WrongField {
        /// Offending scalar.
        scalar: String,
        /// Expected field.
        field: String,
    },
    /// Text could not be parsed.
    #[error("cannot parse {0}")]
    Parse(String),
    /// Inverse of zero requested.
    #[error("division by zero")]
    DivisionByZero,
}

/// The field a scalar lives in: the rationals or GF(p) for an odd prime p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rational numbers.
    Rationals,
    /// Integers modulo a prime.
    Prime(Arc<BigUint>),
}

/// An exact field element: a reduced fraction or a canonical residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Element of Q, always reduced with positive denominator.
    Rational(BigRational),
    /// Element of GF(p), always in `[0, p)`.
    Residue(BigUint),
}

impl Scalar {
    /// True for the additive identity of either kind.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(r) => r.is_zero(),
        }
    }

    /// True for the multiplicative identity of either kind.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(r) => r.is_one(),
        }
    }

    /// The value as a small rational `(num, den)` when it fits in i64.
    pub fn as_small_rational(&self) -> Option<(i64, i64)> {
        match self {
            Scalar::Rational(r) => Some((r.numer().to_i64()?, r.denom().to_i64()?)),
            Scalar::Residue(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// Mersenne prime 2^61 - 1, the default identity-testing modulus.
pub const MERSENNE_61: u64 = (1u64 << 61) - 1;

impl Field {
    /// The rationals.
    pub fn rationals() -> Self {
        Field::Rationals
    }

    /// GF(p); `p` must be an odd prime (64 Miller-Rabin rounds).
    pub fn prime(p: BigUint) -> Result<Self, ScalarError> {
        if p == BigUint::from(2u32) {
            return Err(ScalarError::CharacteristicTwo);
        }
        if !is_probable_prime(&p, 64) {
            return Err(ScalarError::NotPrime(p.to_string()));
        }
        Ok(Field::Prime(Arc::new(p)))
    }

    /// GF(p) for a machine-word prime.
    pub fn prime_u64(p: u64) -> Result<Self, ScalarError> {
        Self::prime(BigUint::from(p))
    }

    /// The modulus of a prime field.
    pub fn modulus(&self) -> Option<&BigUint> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// The modulus when it fits in 63 bits.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus()
            .and_then(|p| p.to_u64())
            .filter(|&p| p < 1 << 63)
    }

    /// Whether `s` is an element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Residue(r)) => r < p.as_ref(),
            _ => false,
        }
    }

    /// Errors unless `s` belongs to this field.
    pub fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(ScalarError::WrongField {
                scalar: s.to_string(),
                field: self.to_string(),
            })
        }
    }

    /// Additive identity.
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(_) => Scalar::Residue(BigUint::zero()),
        }
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::one()),
            Field::Prime(_) => Scalar::Residue(BigUint::one()),
        }
    }

    /// Image of an integer.
    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Residue(reduce_signed(v, p)),
        }
    }

    /// Image of a machine integer.
    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of a nonnegative machine integer.
    pub fn from_u64(&self, v: u64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of `num / den`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(_) => {
                let n = self.from_bigint(num);
                let d = self.from_bigint(den);
                self.div(&n, &d)
            }
        }
    }

    /// `a + b`.
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Field::Prime(p), Scalar::Residue(a), Scalar::Residue(b)) => {
                let s = a + b;
                Scalar::Residue(if &s >= p.as_ref() { s - p.as_ref() } else { s })
            }
            _ => panic!("scalar kind does not match field {self}"),
        }
    }

    /// `-a`.
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(a)) => Scalar::Rational(-a),
            (Field::Prime(p), Scalar::Residue(a)) => Scalar::Residue(if a.is_zero() {
                BigUint::zero()
            } else {
                p.as_ref() - a
            }),
            _ => panic!("scalar kind does not match field {self}"),
        }
    }

    /// `a - b`.
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    /// `a * b`.
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Field::Prime(p), Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(a * b % p.as_ref())
            }
            _ => panic!("scalar kind does not match field {self}"),
        }
    }

    /// `1 / a`.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if a.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Rationals, Scalar::Rational(a)) => Scalar::Rational(a.recip()),
            (Field::Prime(p), Scalar::Residue(a)) => {
                Scalar::Residue(a.modpow(&(p.as_ref() - 2u32), p))
            }
            _ => panic!("scalar kind does not match field {self}"),
        })
    }

    /// `a / b`.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^e`.
    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of `s` in GF(q) for a word-sized prime `q`; `None` when a
    /// rational denominator vanishes mod `q`.
    pub fn residue_mod(&self, s: &Scalar, q: u64) -> Option<u64> {
        match s {
            Scalar::Rational(r) => {
                let qb = BigUint::from(q);
                let n = reduce_signed(r.numer(), &qb).to_u64().unwrap_or(0);
                let d = reduce_signed(r.denom(), &qb).to_u64().unwrap_or(0);
                if d == 0 {
                    return None;
                }
                Some(mulmod(n, powmod(d, q - 2, q), q))
            }
            Scalar::Residue(r) => Some((r % q).to_u64().unwrap_or(0)),
        }
    }

    /// Parses a scalar literal: `a`, `-a` or `a/b` (rationals), or a decimal
    /// residue (prime fields, reduced mod p; fractions are also accepted).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ScalarError> {
        let t = text.trim();
        let bad = || ScalarError::Parse(alloc::format!("scalar `{t}`"));
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (
                BigInt::from_str(a.trim()).map_err(|_| bad())?,
                BigInt::from_str(b.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(t).map_err(|_| bad())?, BigInt::one()),
        };
        self.from_ratio(&num, &den)
    }

    /// Parses `Q`, `q`, `rationals`, `GF(p)`, `gf:p`, `gfp` or a bare prime.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "q" || lower == "rationals" || lower == "rational" {
            return Ok(Field::Rationals);
        }
        let digits = if let Some(rest) = lower.strip_prefix("gf(") {
            rest.strip_suffix(')')
        } else if let Some(rest) = lower.strip_prefix("gf:") {
            Some(rest)
        } else if let Some(rest) = lower.strip_prefix("gf") {
            Some(rest)
        } else {
            Some(lower.as_str())
        };
        let digits = digits.ok_or_else(|| ScalarError::Parse(alloc::format!("field `{t}`")))?;
        let p = BigUint::from_str(digits.trim())
            .map_err(|_| ScalarError::Parse(alloc::format!("field `{t}`")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => f.write_str("Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn reduce_signed(v: &BigInt, p: &BigUint) -> BigUint {
    let m = v.magnitude() % p;
    if v.sign() == Sign::Minus && !m.is_zero() {
        p - m
    } else {
        m
    }
}

/// `a * b mod q`.
pub(crate) fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// `a^e mod q`.
pub(crate) fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    acc
}

/// Signed integer reduced into `[0, q)`.
pub(crate) fn signed_mod(v: &BigInt, q: u64) -> u64 {
    let m = (v.magnitude() % q).to_u64().unwrap_or(0);
    if v.is_negative() && m != 0 {
        q - m
    } else {
        m
    }
}

/// Lcm helper used when clearing denominators.
pub(crate) fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::prelude::v1::*;

    #[test]
    fn rationals_are_reduced() {
        let q = Field::Rationals;
        let a = q.parse_scalar("6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = q.parse_scalar("2/4").unwrap();
        assert_eq!(q.add(&a, &b).to_string(), "-1");
    }

    #[test]
    fn residues_are_canonical() {
        let f = Field::prime_u64(101).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a, Scalar::Residue(BigUint::from(100u32)));
        let half = f.parse_scalar("1/2").unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), f.one());
        assert_eq!(f.neg(&f.zero()), f.zero());
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rationals);
        for t in ["GF(101)", "gf:101", "101", "gf101"] {
            assert_eq!(Field::parse(t).unwrap().to_string(), "GF(101)");
        }
        assert!(matches!(
            Field::parse("GF(100)"),
            Err(ScalarError::NotPrime(_))
        ));
        assert!(matches!(
            Field::parse("2"),
            Err(ScalarError::CharacteristicTwo)
        ));
    }

    #[test]
    fn residue_mod_maps_fractions() {
        let q = Field::Rationals;
        let s = q.parse_scalar("-1/3").unwrap();
        let r = q.residue_mod(&s, 7).unwrap();
        assert_eq!(mulmod(r, 3, 7), 6);
        assert_eq!(q.residue_mod(&q.parse_scalar("1/7").unwrap(), 7), None);
    }
}
