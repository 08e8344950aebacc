//! Scalar abstraction shared by every geometric computation.
//!
//! Interval and circle systems are evaluated in whatever field the caller
//! picks: `f64`/`f32` for quick exploration, [`Rational`] when edge tests
//! must be exact.

use std::fmt::{Debug, Display};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, the exact scalar.
pub type Rational = BigRational;

/// Ordered field usable as coordinates and distances.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Converts an exact rational into this scalar (rounding for floats).
    fn from_rational(r: &Rational) -> Self;

    fn to_f64_lossy(&self) -> f64;

    /// Largest integer not exceeding `self`.
    fn floor_val(&self) -> Self;

    /// True when the scalar is an exact integer.
    fn is_integral(&self) -> bool {
        self.floor_val() == *self
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// `2^(-exp)`.
    fn dyadic(exp: u32) -> Self {
        let two = Self::one() + Self::one();
        let mut v = Self::one();
        for _ in 0..exp {
            v = v / two.clone();
        }
        v
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn floor_val(&self) -> Self {
        self.floor()
    }
    fn dyadic(exp: u32) -> Self {
        Rational::new(BigInt::one(), BigInt::one() << exp as usize)
    }
}

/// Parses `p/q`, an integer, or a finite decimal (`0.125`, `-3.5`) exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Parses a scalar literal into any [`Scalar`].
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    parse_rational(text).map(|r| S::from_rational(&r))
}
