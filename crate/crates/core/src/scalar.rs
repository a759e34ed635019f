//! Number types the geometry and LP code are generic over.
//!
//! Exact arithmetic uses [`Rational`] (arbitrary-precision, always reduced).
//! `f64` is supported as an approximate mode: every sign decision goes through
//! [`Scalar::sign`] with a caller-supplied [`Tolerance`], which exact types
//! ignore.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance applied to comparisons in float mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Self {
        Tolerance(eps.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("cannot parse {0:?} as a number")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("non-finite value {0:?}")]
    NonFinite(String),
    #[error("{0:?} is not an exact rational; use \"p/q\" or enable float arithmetic")]
    NotExact(String),
}

/// Field operations plus tolerance-aware sign tests.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// `true` for exact types; tolerances are then ignored.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_frac(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Sign of `self`, treating `|self| <= tol` as zero in approximate mode.
    fn sign(&self, tol: Tolerance) -> Ordering;
    /// Parses `"p/q"`, `"n"` and (float mode only) decimal notation.
    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError>;
    /// Converts a float; exact types reject non-integral input.
    fn from_f64(v: f64) -> Result<Self, ParseScalarError>;

    fn is_zero_tol(&self, tol: Tolerance) -> bool {
        self.sign(tol) == Ordering::Equal
    }

    fn is_positive_tol(&self, tol: Tolerance) -> bool {
        self.sign(tol) == Ordering::Greater
    }

    fn is_negative_tol(&self, tol: Tolerance) -> bool {
        self.sign(tol) == Ordering::Less
    }

    /// Compares `self` to `other` under the tolerance.
    fn cmp_tol(&self, other: &Self, tol: Tolerance) -> Ordering {
        (self.clone() - other).sign(tol)
    }

    fn abs_val(&self) -> Self {
        if self.sign(Tolerance(0.0)) == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half() -> Self {
        Self::from_frac(1, 2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self, _tol: Tolerance) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let num = BigInt::from_str(n.trim()).map_err(|_| ParseScalarError::Syntax(s.into()))?;
            let den = BigInt::from_str(d.trim()).map_err(|_| ParseScalarError::Syntax(s.into()))?;
            if den.is_zero() {
                return Err(ParseScalarError::ZeroDenominator(s.into()));
            }
            Ok(Rational::new(num, den))
        } else if let Ok(n) = BigInt::from_str(t) {
            Ok(Rational::from_integer(n))
        } else if t.parse::<f64>().is_ok() {
            Err(ParseScalarError::NotExact(s.into()))
        } else {
            Err(ParseScalarError::Syntax(s.into()))
        }
    }

    fn from_f64(v: f64) -> Result<Self, ParseScalarError> {
        if !v.is_finite() {
            return Err(ParseScalarError::NonFinite(v.to_string()));
        }
        if v.fract() != 0.0 || v.abs() > 9.0e15 {
            return Err(ParseScalarError::NotExact(v.to_string()));
        }
        Ok(Self::from_i64(v as i64))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self, tol: Tolerance) -> Ordering {
        if self.abs() <= tol.0 {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn parse_scalar(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        let v = if let Some((n, d)) = t.split_once('/') {
            let num: f64 = n.trim().parse().map_err(|_| ParseScalarError::Syntax(s.into()))?;
            let den: f64 = d.trim().parse().map_err(|_| ParseScalarError::Syntax(s.into()))?;
            if den == 0.0 {
                return Err(ParseScalarError::ZeroDenominator(s.into()));
            }
            num / den
        } else {
            t.parse::<f64>().map_err(|_| ParseScalarError::Syntax(s.into()))?
        };
        Self::from_f64(v)
    }

    fn from_f64(v: f64) -> Result<Self, ParseScalarError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseScalarError::NonFinite(v.to_string()))
        }
    }
}

/// Inner product of two equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.clone() * y;
    }
    acc
}

/// `a - b`, elementwise.
pub fn sub_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn scale_vec<T: Scalar>(a: &[T], c: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * c).collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T], tol: Tolerance) -> bool {
    a.iter().all(|x| x.is_zero_tol(tol))
}

/// Parses a slice of strings into a vector of scalars.
pub fn parse_vec<T: Scalar>(items: &[&str]) -> Result<Vec<T>, ParseScalarError> {
    items.iter().map(|s| T::parse_scalar(s)).collect()
}

/// Shorthand for building exact rationals in tests and fixtures.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den)
}
