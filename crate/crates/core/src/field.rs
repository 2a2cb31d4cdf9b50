//! Exact ground fields: the rationals and prime fields `F_p`.
//!
//! Every scalar is a [`BigRational`]. Over `F_p` scalars are kept as integers
//! in `0..p`, so the same container type serves both fields and all
//! arithmetic goes through the [`Field`] descriptor.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    /// `Q`, or `F<p>` written `F7` for a prime `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Q" {
            return Ok(Field::Rational);
        }
        match s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
            Some(p) if is_prime(p) => Ok(Field::Prime(p)),
            Some(p) => Err(format!("{p} is not prime")),
            None => Err(format!("unknown field `{s}`")),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % p) as u128;
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

impl Field {
    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    /// Maps an arbitrary rational into the field. Fails over `F_p` when the
    /// denominator is divisible by `p`.
    pub fn try_reduce(&self, x: Scalar) -> Option<Scalar> {
        match *self {
            Field::Rational => Some(x),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = x.numer().mod_floor(&pb).to_u64()?;
                let den = x.denom().mod_floor(&pb).to_u64()?;
                if den == 0 {
                    return None;
                }
                let v = (num as u128 * mod_inv(den, p) as u128 % p as u128) as u64;
                Some(Scalar::from_integer(BigInt::from(v)))
            }
        }
    }

    pub fn reduce(&self, x: Scalar) -> Scalar {
        self.try_reduce(x).expect("denominator is not invertible in the prime field")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        Some(self.reduce(a.recip()))
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Integer value in `0..p` of a scalar over `F_p`.
    pub(crate) fn residue(&self, a: &Scalar) -> u64 {
        match *self {
            Field::Rational => panic!("residue requested over Q"),
            Field::Prime(p) => {
                if a.is_integer() && !a.is_negative() && a.numer() < &BigInt::from(p) {
                    a.numer().to_u64().unwrap_or(0)
                } else {
                    self.reduce(a.clone()).numer().to_u64().unwrap_or(0)
                }
            }
        }
    }

    /// Renders a scalar the way the presentation grammar reads it back.
    /// Prime-field residues above `p/2` are printed as negative integers.
    pub fn render(&self, a: &Scalar) -> String {
        match *self {
            Field::Rational => a.to_string(),
            Field::Prime(p) => {
                let v = self.residue(a);
                if v > p / 2 {
                    format!("-{}", p - v)
                } else {
                    v.to_string()
                }
            }
        }
    }

    pub fn is_negative_repr(&self, a: &Scalar) -> bool {
        match *self {
            Field::Rational => a.is_negative(),
            Field::Prime(p) => self.residue(a) > p / 2,
        }
    }
}
