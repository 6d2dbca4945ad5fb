//! Exact rational scalars.
//!
//! All scalar quantities (entries, line sums, weights, step sizes) are
//! arbitrary-precision fractions in lowest terms. `BigRational` normalizes
//! on construction, so equality is structural.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3/5"`, `"-2"`, `"0.125"` or `".5"` into an exact fraction.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p = parse_decimal(p)?;
        let q = parse_decimal(q)?;
        if q.is_zero() {
            return None;
        }
        return Some(p / q);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// `p/q`, or just `p` for integers.
pub fn format_fraction(value: &Rational) -> String {
    value.to_string()
}

/// Serializes as a `p/q` string; use with `#[serde(serialize_with)]`.
pub fn serialize_fraction<S: serde::Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_fraction(value))
}

pub fn serialize_opt_fraction<S: serde::Serializer>(
    value: &Option<Rational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.serialize_some(&format_fraction(v)),
        None => serializer.serialize_none(),
    }
}

/// Exact decimal expansion when the denominator has no prime factors other
/// than 2 and 5; `None` otherwise.
pub fn format_decimal(value: &Rational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while denom.is_multiple_of(&two) {
        denom /= &two;
        twos += 1;
    }
    while denom.is_multiple_of(&five) {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if value.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{:0>width$}", digits, width = places + 1);
    let (head, tail) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{head}.{tail}"))
}

pub fn is_integral(value: &Rational) -> bool {
    value.is_integer()
}

/// Ceiling of a nonnegative rational as `usize`.
pub fn ceil_usize(value: &Rational) -> usize {
    value.ceil().to_integer().to_usize().expect("nonnegative value fits in usize")
}

/// Floor of a nonnegative rational as `usize`.
pub fn floor_usize(value: &Rational) -> usize {
    value.floor().to_integer().to_usize().expect("nonnegative value fits in usize")
}

pub fn from_usize(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Lossy conversion for display and heuristics only.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
