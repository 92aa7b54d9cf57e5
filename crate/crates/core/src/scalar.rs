//! The scalar field every polynomial and operator in this crate is generic over.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// An exact field of characteristic zero.
///
/// Equality must be exact: the sparse containers drop any coefficient for
/// which `is_zero` holds, so an inexact type would silently lose terms.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_u64(v: u64) -> Self {
        Self::from_i64(i64::try_from(v).expect("integer constant exceeds i64"))
    }
}

macro_rules! ratio_scalar {
    ($int:ty, $conv:expr) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer($conv(v))
            }

            fn from_frac(num: i64, den: i64) -> Self {
                Ratio::new($conv(num), $conv(den))
            }
        }
    };
}

ratio_scalar!(BigInt, BigInt::from);
ratio_scalar!(i64, |v: i64| v);
ratio_scalar!(i128, i128::from);

/// Serde adapter writing a scalar as its `p/q` string.
pub mod as_string {
    use std::str::FromStr;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Scalar;

    pub fn serialize<S: Scalar, Ser: Serializer>(v: &S, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, S: Scalar + FromStr, D: Deserializer<'de>>(d: D) -> Result<S, D::Error> {
        let t = String::deserialize(d)?;
        t.parse::<S>().map_err(|_| D::Error::custom(format!("bad rational {t:?}")))
    }
}

/// `x^e` by repeated squaring.
pub fn pow<S: Scalar>(x: &S, mut e: u32) -> S {
    let mut base = x.clone();
    let mut acc = S::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        e >>= 1;
    }
    acc
}

/// `(-1)^e`.
pub fn sign<S: Scalar>(e: u32) -> S {
    if e % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}
