//! Arithmetic backends for the solvers.
//!
//! Every level average is a rational number with a small denominator, so the
//! projection and search code is generic over [`Scalar`]: `f64` for speed and
//! [`BigRational`] when a result has to be certified exactly. Rational values
//! are built from the exact binary value of each `f64` input.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num::{BigRational, Signed, ToPrimitive, Zero};

/// Relative tolerance for comparing averages in floating point. The absolute
/// tolerance is this times the largest absolute input value.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// True when comparisons are exact and no tolerance is applied.
    const EXACT: bool;

    fn zero() -> Self;

    fn from_f64(v: f64) -> Self;

    fn from_usize(n: usize) -> Self;

    fn to_f64(&self) -> f64;

    /// Absolute comparison slack for data whose largest magnitude is `scale`.
    fn tolerance(scale: f64) -> Self;

    fn abs(&self) -> Self;

    /// Sum of a sequence. The `f64` backend uses Neumaier compensation.
    fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        iter.into_iter().fold(Self::zero(), |acc, v| acc + v)
    }

    /// Exact decimal-free rendering, e.g. `914/3` for rationals.
    fn render(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    #[inline]
    fn zero() -> Self {
        0.0
    }

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        n as f64
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }

    #[inline]
    fn tolerance(scale: f64) -> Self {
        RELATIVE_TOLERANCE * scale
    }

    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for v in iter {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite input")
    }

    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(n.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn tolerance(_scale: f64) -> Self {
        <BigRational as Zero>::zero()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// `a <= b` up to `tol`.
#[inline]
pub(crate) fn le_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    a.clone() - b.clone() <= *tol
}

/// `a < b` by more than `tol`.
#[inline]
pub(crate) fn lt_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    b.clone() - a.clone() > *tol
}
