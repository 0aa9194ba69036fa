//! Exact coefficient domains.
//!
//! Every computation in the crate is generic over [`Scalar`], a small
//! extension of the `num-traits` ring traits. Three families implement it:
//! arbitrary-precision integers ([`BigInt`]), rationals ([`BigRational`]) and
//! prime fields ([`Fp`]). Linear algebra over a non-field scalar runs in its
//! fraction field, reached through [`Scalar::Field`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact commutative coefficient ring.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Fraction field (the type itself for fields).
    type Field: Field;

    fn domain() -> CoefficientDomain;

    /// Image of an integer under the canonical map `ℤ → Self`.
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    fn to_field(&self) -> Self::Field;

    /// The integer this element equals, when it is one. Prime field elements
    /// report their least non-negative representative.
    fn to_integer(&self) -> Option<BigInt>;

    /// Sign used only for printing.
    fn is_negative(&self) -> bool {
        false
    }

    /// Multiplicative inverse when it exists in `Self`.
    fn try_inverse(&self) -> Option<Self>;
}

/// A [`Scalar`] in which every nonzero element is invertible.
pub trait Field: Scalar<Field = Self> + Div<Output = Self> {
    fn inverse(&self) -> Self {
        self.try_inverse().expect("inverse of zero")
    }
}

impl Scalar for BigInt {
    type Field = BigRational;

    fn domain() -> CoefficientDomain {
        CoefficientDomain::Integers
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_field(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn to_integer(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_one() || (-self).is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
}

impl Scalar for BigRational {
    type Field = BigRational;

    fn domain() -> CoefficientDomain {
        CoefficientDomain::Rationals
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_field(&self) -> BigRational {
        self.clone()
    }

    fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer_part())
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Field for BigRational {}

trait IntegerPart {
    fn to_integer_part(&self) -> BigInt;
}

impl IntegerPart for BigRational {
    fn to_integer_part(&self) -> BigInt {
        self.numer() / self.denom()
    }
}

/// Element of the prime field `𝔽_P`, stored as its least non-negative
/// representative. `P` must be prime and below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp((self.0 * rhs.0) % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * Field::inverse(&rhs)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    type Field = Self;

    fn domain() -> CoefficientDomain {
        CoefficientDomain::PrimeField(P)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u64().expect("residue fits in u64"))
    }

    fn to_field(&self) -> Self {
        *self
    }

    fn to_integer(&self) -> Option<BigInt> {
        Some(BigInt::from(self.0))
    }

    fn try_inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}

impl<const P: u64> Field for Fp<P> {}

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;

/// Runtime name of a coefficient domain, as used in configs and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CoefficientDomain {
    Rationals,
    Integers,
    PrimeField(u64),
}

impl CoefficientDomain {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientDomain::Integers)
    }

    /// Checks the prime-field invariant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            CoefficientDomain::PrimeField(p) if !is_prime(p) => Err(Error::NotPrime(p)),
            _ => Ok(()),
        }
    }

    /// Runs `visitor` with the concrete scalar type of this domain.
    pub fn visit<V: ScalarVisitor>(&self, visitor: V) -> Result<V::Output> {
        self.validate()?;
        match *self {
            CoefficientDomain::Rationals => Ok(visitor.visit::<BigRational>()),
            CoefficientDomain::Integers => Ok(visitor.visit::<BigInt>()),
            CoefficientDomain::PrimeField(p) => visit_prime(p, visitor),
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Rationals => write!(f, "Q"),
            CoefficientDomain::Integers => write!(f, "Z"),
            CoefficientDomain::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for CoefficientDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let d = match t {
            "Q" | "q" | "QQ" => CoefficientDomain::Rationals,
            "Z" | "z" | "ZZ" => CoefficientDomain::Integers,
            _ => {
                let p = t
                    .strip_prefix("Fp:")
                    .or_else(|| t.strip_prefix("F:"))
                    .or_else(|| t.strip_prefix('F'))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::UnknownDomain(s.to_string()))?;
                CoefficientDomain::PrimeField(p)
            }
        };
        d.validate()?;
        Ok(d)
    }
}

impl TryFrom<String> for CoefficientDomain {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CoefficientDomain> for String {
    fn from(d: CoefficientDomain) -> String {
        d.to_string()
    }
}

/// Generic callback used by [`CoefficientDomain::visit`].
pub trait ScalarVisitor {
    type Output;
    fn visit<C: Scalar>(self) -> Self::Output;
}

macro_rules! prime_dispatch {
    ($p:expr, $visitor:expr; $($prime:literal),* $(,)?) => {
        match $p {
            $($prime => Ok($visitor.visit::<Fp<$prime>>()),)*
            other => Err(Error::UnsupportedPrime(
                other,
                [$(stringify!($prime)),*].join(", "),
            )),
        }
    };
}

fn visit_prime<V: ScalarVisitor>(p: u64, visitor: V) -> Result<V::Output> {
    prime_dispatch!(p, visitor;
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
        73, 79, 83, 89, 97, 101, 32003, 65521, 2147483647,
    )
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
