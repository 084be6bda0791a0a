//! Commutative semirings used as coefficient rings.
//!
//! Three instances are supported: the naturals `ℕ`, the rationals `ℚ`, and the
//! residues `ℤ/mℤ` for any `m >= 2`. Only `ℚ` inverts the positive naturals,
//! which is what the Taylor and distance operations need for their `1/n!`
//! factors.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which commutative semiring a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semiring {
    Nat,
    Rat,
    ZMod(u64),
}

/// Static description of a semiring instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringDescriptor {
    pub name: String,
    pub characteristic_hint: Option<u64>,
    pub supports_nat_inverse: bool,
}

impl Semiring {
    pub fn descriptor(self) -> SemiringDescriptor {
        SemiringDescriptor {
            name: self.to_string(),
            characteristic_hint: match self {
                Semiring::Nat | Semiring::Rat => Some(0),
                Semiring::ZMod(m) => Some(m),
            },
            supports_nat_inverse: self.supports_nat_inverse(),
        }
    }

    /// True exactly when every positive natural is invertible.
    pub fn supports_nat_inverse(self) -> bool {
        matches!(self, Semiring::Rat)
    }

    /// Additive inverses exist (ℚ and ℤ/mℤ, not ℕ).
    pub fn has_negation(self) -> bool {
        !matches!(self, Semiring::Nat)
    }

    /// Fails with the capability error unless this is a ℚ≥0-algebra.
    pub fn require_nat_inverse(self) -> Result<()> {
        if self.supports_nat_inverse() {
            Ok(())
        } else {
            Err(Error::RequiresRationalAlgebra {
                semiring: self.to_string(),
            })
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Semiring::Nat => Scalar::Nat(BigUint::zero()),
            Semiring::Rat => Scalar::Rat(BigRational::zero()),
            Semiring::ZMod(m) => Scalar::ZMod { value: 0, modulus: m },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            Semiring::Nat => Scalar::Nat(BigUint::one()),
            Semiring::Rat => Scalar::Rat(BigRational::one()),
            Semiring::ZMod(m) => Scalar::ZMod { value: 1 % m, modulus: m },
        }
    }

    /// `1 + ... + 1` (`n` times).
    pub fn nat_embed(self, n: u64) -> Scalar {
        match self {
            Semiring::Nat => Scalar::Nat(BigUint::from(n)),
            Semiring::Rat => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Semiring::ZMod(m) => Scalar::ZMod { value: n % m, modulus: m },
        }
    }

    /// The scalar `1/n!`.
    pub fn inv_factorial(self, n: u64) -> Result<Scalar> {
        self.require_nat_inverse()?;
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        Ok(Scalar::Rat(BigRational::new(BigInt::one(), fact)))
    }

    /// The scalar `1/n` for positive `n`.
    pub fn inv_nat(self, n: u64) -> Result<Scalar> {
        self.require_nat_inverse()?;
        assert!(n > 0, "inverse of zero");
        Ok(Scalar::Rat(BigRational::new(BigInt::one(), BigInt::from(n))))
    }

    /// Embeds a signed integer; negative values need additive inverses.
    pub fn from_i64(self, v: i64) -> Result<Scalar> {
        let s = self.nat_embed(v.unsigned_abs());
        if v >= 0 {
            Ok(s)
        } else {
            s.neg().ok_or_else(|| Error::InvalidScalar {
                value: v.to_string(),
                semiring: self.to_string(),
            })
        }
    }

    /// Builds `num/den` exactly. Only ℚ accepts a denominator other than 1.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let invalid = || Error::InvalidScalar {
            value: format!("{num}/{den}"),
            semiring: self.to_string(),
        };
        if den.is_zero() {
            return Err(invalid());
        }
        match self {
            Semiring::Rat => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
            _ if !den.is_one() => Err(invalid()),
            Semiring::Nat => num.to_biguint().map(Scalar::Nat).ok_or_else(invalid),
            Semiring::ZMod(m) => {
                let r = num.mod_floor_u64(m);
                Ok(Scalar::ZMod { value: r, modulus: m })
            }
        }
    }

    /// Parses an integer or `p/q` literal in this semiring.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let invalid = || Error::InvalidScalar {
            value: text.to_string(),
            semiring: self.to_string(),
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| invalid())?;
        let den = BigInt::from_str(den).map_err(|_| invalid())?;
        self.from_fraction(&num, &den)
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        let m_big = BigInt::from(m);
        let r = ((self % &m_big) + &m_big) % &m_big;
        r.to_u64().expect("residue fits in u64")
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semiring::Nat => f.write_str("nat"),
            Semiring::Rat => f.write_str("rat"),
            Semiring::ZMod(m) => write!(f, "zmod:{m}"),
        }
    }
}

impl FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(Semiring::Nat),
            "rat" => Ok(Semiring::Rat),
            _ => {
                let m = s
                    .strip_prefix("zmod:")
                    .and_then(|m| m.parse::<u64>().ok())
                    .filter(|&m| m >= 2)
                    .ok_or_else(|| Error::UnknownSemiring(s.to_string()))?;
                Ok(Semiring::ZMod(m))
            }
        }
    }
}

/// An element of one of the supported semirings.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed by
/// `BigRational`), residues stay in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Nat(BigUint),
    Rat(BigRational),
    ZMod { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn semiring(&self) -> Semiring {
        match self {
            Scalar::Nat(_) => Semiring::Nat,
            Scalar::Rat(_) => Semiring::Rat,
            Scalar::ZMod { modulus, .. } => Semiring::ZMod(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Nat(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::ZMod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Nat(n) => n.is_one(),
            Scalar::Rat(q) => q.is_one(),
            Scalar::ZMod { value, .. } => *value == 1,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::ScalarMismatch {
            left: self.semiring().to_string(),
            right: other.semiring().to_string(),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Nat(a), Scalar::Nat(b)) => Ok(Scalar::Nat(a + b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a + b)),
            (
                Scalar::ZMod { value: a, modulus: m },
                Scalar::ZMod { value: b, modulus: n },
            ) if m == n => Ok(Scalar::ZMod {
                value: ((*a as u128 + *b as u128) % *m as u128) as u64,
                modulus: *m,
            }),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Nat(a), Scalar::Nat(b)) => Ok(Scalar::Nat(a * b)),
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a * b)),
            (
                Scalar::ZMod { value: a, modulus: m },
                Scalar::ZMod { value: b, modulus: n },
            ) if m == n => Ok(Scalar::ZMod {
                value: ((*a as u128 * *b as u128) % *m as u128) as u64,
                modulus: *m,
            }),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Additive inverse, absent over ℕ (except for zero).
    pub fn neg(&self) -> Option<Scalar> {
        match self {
            Scalar::Nat(n) if n.is_zero() => Some(self.clone()),
            Scalar::Nat(_) => None,
            Scalar::Rat(q) => Some(Scalar::Rat(-q)),
            Scalar::ZMod { value, modulus } => Some(Scalar::ZMod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.semiring().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True for rationals below zero; the printer uses it to emit `-`.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_negative())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    /// Panics on semiring mismatch; use [`Scalar::checked_add`] for untrusted input.
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar semiring mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    /// Panics on semiring mismatch; use [`Scalar::checked_mul`] for untrusted input.
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar semiring mismatch")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Nat(n) => write!(f, "{n}"),
            Scalar::Rat(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::ZMod { value, .. } => write!(f, "{value}"),
        }
    }
}

pub fn scalar_add(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.checked_add(b)
}

pub fn scalar_mul(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.checked_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_addition() {
        assert_eq!(scalar_add(&q(1, 2), &q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(5, 6).to_string(), "5/6");
    }

    #[test]
    fn characteristic_two() {
        let z2 = Semiring::ZMod(2);
        let one = z2.one();
        assert!(scalar_add(&one, &one).unwrap().is_zero());
        assert!(z2.nat_embed(2).is_zero());
    }

    #[test]
    fn embeddings() {
        assert_eq!(Semiring::Rat.nat_embed(3), q(3, 1));
        assert_eq!(Semiring::Nat.nat_embed(7).to_string(), "7");
        assert!(Semiring::Nat.nat_embed(0).is_zero());
    }

    #[test]
    fn inverse_factorials() {
        assert_eq!(Semiring::Rat.inv_factorial(3).unwrap(), q(1, 6));
        assert_eq!(Semiring::Rat.inv_factorial(0).unwrap(), q(1, 1));
        let err = Semiring::Nat.inv_factorial(2).unwrap_err();
        assert!(err.to_string().contains("requires ℚ≥0-algebra"));
        assert!(Semiring::ZMod(7).inv_factorial(1).is_err());
    }

    #[test]
    fn factorial_round_trip() {
        let r = Semiring::Rat;
        for n in 1..=12u64 {
            let fact_prev: u64 = (1..n).product();
            let prod = &(&r.nat_embed(n) * &r.inv_factorial(n).unwrap()) * &r.nat_embed(fact_prev);
            assert!(prod.is_one(), "n = {n}");
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let e = scalar_add(&Semiring::Nat.one(), &Semiring::Rat.one()).unwrap_err();
        assert!(matches!(e, Error::ScalarMismatch { .. }));
        let e = scalar_mul(&Semiring::ZMod(3).one(), &Semiring::ZMod(5).one()).unwrap_err();
        assert!(matches!(e, Error::ScalarMismatch { .. }));
    }

    #[test]
    fn tokens() {
        assert_eq!("zmod:5".parse::<Semiring>().unwrap(), Semiring::ZMod(5));
        assert_eq!("rat".parse::<Semiring>().unwrap(), Semiring::Rat);
        assert!("zmod:1".parse::<Semiring>().is_err());
        assert!("real".parse::<Semiring>().is_err());
        for s in [Semiring::Nat, Semiring::Rat, Semiring::ZMod(9)] {
            assert_eq!(s.to_string().parse::<Semiring>().unwrap(), s);
        }
        assert!(Semiring::Rat.descriptor().supports_nat_inverse);
        assert!(!Semiring::ZMod(3).descriptor().supports_nat_inverse);
    }

    #[test]
    fn literals() {
        assert_eq!(Semiring::Rat.parse_scalar("6/4").unwrap(), q(3, 2));
        assert_eq!(Semiring::ZMod(5).parse_scalar("-1").unwrap().to_string(), "4");
        assert!(Semiring::Nat.parse_scalar("1/2").is_err());
        assert!(Semiring::Nat.parse_scalar("-1").is_err());
        assert!(Semiring::Rat.parse_scalar("1/0").is_err());
    }

    fn random_scalar(rng: &mut ChaCha8Rng, s: Semiring) -> Scalar {
        match s {
            Semiring::Nat => s.nat_embed(rng.gen_range(0..50)),
            Semiring::Rat => q(rng.gen_range(-20..=20), rng.gen_range(1..=9)),
            Semiring::ZMod(m) => s.nat_embed(rng.gen_range(0..m)),
        }
    }

    #[test]
    fn semiring_laws() {
        for s in [Semiring::Nat, Semiring::Rat, Semiring::ZMod(2), Semiring::ZMod(6)] {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..1000 {
                let a = random_scalar(&mut rng, s);
                let b = random_scalar(&mut rng, s);
                let c = random_scalar(&mut rng, s);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a + &b, &b + &a);
                assert_eq!(&a * &b, &b * &a);
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a + &s.zero(), a);
                assert_eq!(&a * &s.one(), a);
                assert!((&s.zero() * &a).is_zero());
            }
        }
    }
}
