//! Number layer shared by every module.
//!
//! All geometry and probability code is generic over [`Scalar`]. Two
//! implementations exist: [`Rational`] (arbitrary precision, canonical
//! reduced form) and `f64`. Because the mode is a type parameter, mixing
//! exact and floating values is rejected at compile time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseScalarError;

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!(
                "unknown mode '{other}' (expected 'exact' or 'float')"
            )),
        }
    }
}

/// Relative tolerance for zero tests of determinants in float mode.
pub const EPS_GEO: f64 = 1e-9;
/// Absolute tolerance on the total mass of a float distribution.
pub const EPS_MASS: f64 = 1e-12;
/// Relative tolerance on the mean of a float distribution.
pub const EPS_MEAN: f64 = 1e-9;
/// Relative tolerance for agreement of invariant evaluations in float mode.
pub const EPS_PHI: f64 = 1e-9;
/// Absolute tolerance on reconstructed atom masses in float mode.
pub const EPS_REC: f64 = 1e-9;

/// A field element usable as coordinate, mass or invariant value.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Lossy conversion from an exact value (identity in exact mode).
    fn from_rational(r: &Rational) -> Self;
    /// Parses `p/q`, integers and decimals (optionally with an exponent).
    fn parse_text(s: &str) -> Result<Self, ParseScalarError>;
    /// Text form that `parse_text` reads back to the identical value.
    fn to_text(&self) -> String;

    fn is_exact() -> bool {
        Self::MODE == Mode::Exact
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sign of the value, treating `|self| <= tol` as zero in float mode.
    /// Exact mode ignores `tol`.
    fn sign_within(&self, tol: f64) -> Ordering {
        let zero = Self::zero();
        if Self::is_exact() {
            return self.partial_cmp(&zero).unwrap_or(Ordering::Equal);
        }
        let v = self.to_f64();
        if v.abs() <= tol {
            Ordering::Equal
        } else if v > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Equality up to an absolute tolerance (exact equality in exact mode).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::is_exact() {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn parse_text(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        let value = if t.contains('/') {
            let r = parse_rational(t)?;
            ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
        } else {
            t.parse::<f64>()
                .map_err(|_| ParseScalarError::new(s, "not a decimal number"))?
        };
        if !value.is_finite() {
            return Err(ParseScalarError::new(s, "value is not finite"));
        }
        Ok(value)
    }

    fn to_text(&self) -> String {
        // `{:?}` is the shortest representation that round-trips.
        format!("{self:?}")
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Parses an exact rational from `p/q`, an integer, or a decimal such as
/// `-1.25e-3`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseScalarError::new(s, "empty number"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num =
            parse_integer(num.trim()).ok_or_else(|| ParseScalarError::new(s, "bad numerator"))?;
        let den =
            parse_integer(den.trim()).ok_or_else(|| ParseScalarError::new(s, "bad denominator"))?;
        if den.is_zero() {
            return Err(ParseScalarError::new(s, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(t).ok_or_else(|| ParseScalarError::new(s, "not a rational or decimal number"))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .strip_prefix('+')
                .unwrap_or(&s[i + 1..])
                .parse::<i32>()
                .ok()?,
        ),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}
