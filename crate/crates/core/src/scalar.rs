//! Exact rational numbers and the scalar abstraction shared by all
//! functional evaluators.
//!
//! Matroid construction is always exact; functional evaluation and
//! optimization run either in `f64` (fast, compensated summation) or in
//! [`Rational`] (bit-exact). The [`Scalar`] trait is the switch.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (guaranteed by the underlying representation).
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty numeric string")]
    Empty,
    #[error("invalid numeric string {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"`, integer, or plain decimal strings into an exact rational.
///
/// Decimals expand exactly: `"0.25"` becomes 1/4, never a float round-trip.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| invalid())?;
        let d: BigInt = den.trim().parse().map_err(|_| invalid())?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') { -1 } else { 1 };
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| invalid())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let digits: BigInt = frac.parse().map_err(|_| invalid())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rational::new(digits * sign, scale);
        return Ok(Rational::from(w) + frac_part);
    }
    let n: BigInt = s.parse().map_err(|_| invalid())?;
    Ok(Rational::from(n))
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Numeric scalar for functional evaluation: `f64` or exact [`Rational`].
///
/// Implementations must make `zero()`, `one()` and the arithmetic ops exact
/// for integral values; only `f64` rounds.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Zero
    + One
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_ratio(r: &Rational) -> Self;
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;

    /// Integer power by repeated squaring.
    fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Comparison band for "equality" classification; zero in exact mode.
    fn equality_band(tol: f64) -> Self;

    /// Sums a sequence; the `f64` impl compensates rounding (Neumaier).
    fn sum_iter<I: Iterator<Item = Self>>(it: I) -> Self {
        let mut acc = Self::zero();
        for v in it {
            acc = acc + v;
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or_else(|| {
            // Fall back through a reduced quotient when numerator/denominator
            // individually overflow f64.
            let n = ToPrimitive::to_f64(r.numer()).unwrap_or(f64::INFINITY);
            let d = ToPrimitive::to_f64(r.denom()).unwrap_or(f64::INFINITY);
            n / d
        })
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn pow_u(&self, e: u32) -> Self {
        self.powi(e as i32)
    }

    fn equality_band(tol: f64) -> Self {
        tol
    }

    fn sum_iter<I: Iterator<Item = Self>>(it: I) -> Self {
        // Neumaier variant of Kahan summation.
        let mut sum = 0.0;
        let mut comp = 0.0;
        for v in it {
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
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn from_int(v: i64) -> Self {
        Rational::from(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        <f64 as Scalar>::from_ratio(self)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn equality_band(_tol: f64) -> Self {
        Rational::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-7").unwrap(), Rational::from(BigInt::from(-7)));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational(" 2 / 6 ").unwrap(), Rational::new(1.into(), 3.into()));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a.b").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn decimal_expansion_is_exact() {
        let r = parse_rational("0.613").unwrap();
        assert_eq!(r, Rational::new(613.into(), 1000.into()));
    }

    #[test]
    fn pow_and_sum_agree_across_scalars() {
        let r = Rational::new(2.into(), 3.into());
        let f = 2.0 / 3.0;
        assert!((Scalar::pow_u(&f, 5) - Scalar::to_f64(&r.pow_u(5))).abs() < 1e-15);
        let fs = f64::sum_iter([0.1, 0.2, 0.3].into_iter());
        assert!((fs - 0.6).abs() < 1e-15);
    }

    #[test]
    fn negative_decimal_below_one() {
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new((-1).into(), 2.into()));
    }
}
