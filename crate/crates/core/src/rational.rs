//! Exact rational numbers and their canonical `p/q` text form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical form: `p/q` with `q > 0` and `gcd(|p|, q) = 1`, always with a slash.
pub fn format_rational(x: &Rational) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a canonical rational `p/q`: {}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Strict inverse of [`format_rational`]: rejects missing denominators,
/// nonpositive denominators, unreduced fractions and stray signs.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (p, q) = s.split_once('/').ok_or_else(err)?;
    let digits_ok = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let p_body = p.strip_prefix('-').unwrap_or(p);
    if !digits_ok(p_body) || !digits_ok(q) {
        return Err(err());
    }
    // No leading zeros, no "-0".
    if (p_body.len() > 1 && p_body.starts_with('0')) || (q.len() > 1 && q.starts_with('0')) {
        return Err(err());
    }
    if p.starts_with('-') && p_body == "0" {
        return Err(err());
    }
    let numer = BigInt::from_str(p).map_err(|_| err())?;
    let denom = BigInt::from_str(q).map_err(|_| err())?;
    if !denom.is_positive() {
        return Err(err());
    }
    if !num_integer::Integer::gcd(&numer, &denom).is_one() && !(numer.is_zero() && denom.is_one()) {
        return Err(err());
    }
    Ok(Rational::new_raw(numer, denom))
}

/// `Some(n)` when `x` is an integer that fits in an `i64`.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.numer()).ok()
}
