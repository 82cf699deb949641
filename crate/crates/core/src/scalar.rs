//! Scalar abstractions.
//!
//! [`Scalar`] covers ordered fields (`f32`, `f64`, [`BigRational`]) and drives the
//! counting recursions in both float and exact mode. [`Ring`] and [`ExactDiv`]
//! are the coefficient bounds for dense polynomials, so the same resultant code
//! runs over the rationals and over `Q[x]`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// An ordered field usable in both float and exact recursions.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> {
    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn as_f64(&self) -> f64;

    /// Storage size in bits, for exact types whose size can grow without bound.
    fn size_bits(&self) -> u64 {
        0
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }
    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn as_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn size_bits(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }
}

/// Converts a big rational to the nearest-ish `f64`, robust to huge numerators
/// and denominators (both are shifted down to 64 significant bits first).
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let n = (r.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// Commutative ring with identity, as needed by dense polynomial arithmetic.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

/// A ring in which `a / b` is computable whenever `b` divides `a`.
///
/// For fields this is ordinary division. Integral domains such as `Z` or `Q[x]`
/// implement it only for exact quotients; a non-exact call is a logic error.
pub trait ExactDiv: Ring {
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl Ring for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl ExactDiv for BigRational {
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        debug_assert!(r.is_zero(), "inexact integer division");
        q
    }
}

impl Ring for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl ExactDiv for f64 {
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
