//! Scalar abstraction: the group arithmetic, exterior algebra and degree
//! machinery run over any [`Scalar`], which is either a float type or an
//! exact rational. The metric and measure layers additionally need roots
//! and transcendentals and are bounded by [`RealScalar`].
//!
//! The split encodes the dual-arithmetic design: float scalars compare
//! coefficients against a relative threshold, exact scalars compare
//! against literal zero, so the same degree code doubles as a
//! threshold-free oracle when instantiated with `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic in this scalar is exact (no rounding).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn from_int(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn abs(&self) -> Self;

    /// Integer power, `e >= 0`.
    fn powi(&self, e: u32) -> Self;

    /// Coefficient-dropping test. Float scalars: `|self| <= rel_tol * |scale|`.
    /// Exact scalars: `self == 0`, ignoring the tolerance.
    fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool;

    /// Lossy view for reporting; exact values may round.
    fn to_f64_lossy(&self) -> f64;
}

/// Scalars with roots and logs: everything the metric side needs.
pub trait RealScalar: Scalar + Float + FromPrimitive {}

/// Shorthand float-to-real conversion (`rf(0.5)` in generic code).
pub fn rf<R: RealScalar>(v: f64) -> R {
    <R as FromPrimitive>::from_f64(v).expect("finite f64 converts")
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                (n / d) as $t
            }

            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn powi(&self, e: u32) -> Self {
                <$t>::powi(*self, e as i32)
            }

            fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool {
                Scalar::abs(self) <= (rel_tol as $t) * Scalar::abs(scale)
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }

        impl RealScalar for $t {}
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn powi(&self, e: u32) -> Self {
        num_traits::Pow::pow(self, e as i32)
    }

    fn is_negligible(&self, _scale: &Self, _rel_tol: f64) -> bool {
        self.is_zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

/// Exact conversion of an `f64` into a rational (every finite float is one).
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}
