//! Scalar abstractions shared by every module.
//!
//! Evaluation code (trees, geometry, threshold tolerance realization) is written
//! against [`Scalar`], so it runs unchanged on `f64`, `Ratio<i64>` or the
//! arbitrary-precision [`Rational`](crate::Rational). Code that needs exact
//! integer structure (integerization, fraction-free pivoting) is generic over
//! [`ExactInt`] instead.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

/// An ordered field-like number type used for weights, distances and coordinates.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync {}

impl<T: Num + Signed + Clone + PartialOrd + Debug + Send + Sync> Scalar for T {}

/// A signed integer type usable as the numerator/denominator of exact rationals
/// and as the entry type of the fraction-free simplex tableau.
///
/// Primitive widths report overflow through the `Checked*` operations so callers
/// can retry with [`BigInt`].
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Into<BigInt>
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Into<BigInt>
        + 'static
{
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberError {
    #[error("not a rational number: `{0}`")]
    Syntax(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q`, an integer `p`, or a finite decimal such as `0.5`.
pub fn parse_rational<I: ExactInt>(text: &str) -> Result<Ratio<I>, NumberError> {
    let syntax = || NumberError::Syntax(text.to_string());
    let int = |s: &str| -> Result<I, NumberError> {
        let s = s.strip_prefix('+').unwrap_or(s);
        if s.is_empty() {
            return Err(syntax());
        }
        s.parse::<I>().map_err(|_| syntax())
    };
    if let Some((p, q)) = text.split_once('/') {
        let (p, q) = (int(p)?, int(q)?);
        if q.is_zero() {
            return Err(NumberError::ZeroDenominator(text.to_string()));
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax());
        }
        let negative = whole.starts_with('-');
        let whole_val = if whole == "-" || whole == "+" || whole.is_empty() {
            I::zero()
        } else {
            int(whole)?
        };
        let ten = I::from_u8(10).ok_or_else(syntax)?;
        let mut scale = I::one();
        for _ in 0..frac.len() {
            scale = scale.checked_mul(&ten).ok_or_else(syntax)?;
        }
        let frac_val = int(frac)?;
        let frac_ratio = Ratio::new(frac_val, scale);
        let whole_ratio = Ratio::from_integer(whole_val);
        return Ok(if negative {
            whole_ratio - frac_ratio
        } else {
            whole_ratio + frac_ratio
        });
    }
    Ok(Ratio::from_integer(int(text)?))
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn format_rational<I: ExactInt>(value: &Ratio<I>) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Widens a rational over any exact integer type to the arbitrary-precision type.
pub fn to_big<I: ExactInt>(value: &Ratio<I>) -> Ratio<BigInt> {
    Ratio::new(value.numer().clone().into(), value.denom().clone().into())
}

/// Least common multiple of the denominators of `values` (1 for an empty input).
pub fn lcm_of_denominators<'a, I: ExactInt>(values: impl IntoIterator<Item = &'a Ratio<I>>) -> I {
    values
        .into_iter()
        .fold(I::one(), |acc, v| acc.lcm(v.denom()))
}
