//! Exact rational helpers shared by every module.
//!
//! All arithmetic in the crate is carried out on [`Rational`], an
//! arbitrary-precision reduced fraction with positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses one numeric token: an integer (`-12`), a decimal (`0.15`) or a
/// fraction (`-3/4`). Decimals are converted exactly in base 10.
pub fn parse_token(token: &str) -> Option<Rational> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());

    let value = if let Some((int_part, frac_part)) = body.split_once('.') {
        if !all_digits(int_part) || !all_digits(frac_part) {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        Rational::new(digits, scale)
    } else if let Some((num, den)) = body.split_once('/') {
        if !all_digits(num) || !all_digits(den) || den.starts_with('0') {
            return None;
        }
        Rational::new(num.parse().ok()?, den.parse().ok()?)
    } else {
        if !all_digits(body) {
            return None;
        }
        Rational::from_integer(body.parse().ok()?)
    };
    Some(if negative { -value } else { value })
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Numerator and denominator as decimal strings.
pub fn to_pair(r: &Rational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

pub fn from_pair(num: &str, den: &str) -> Option<Rational> {
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Largest multiple of `2^-bits` not exceeding `r`.
pub fn floor_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    if (scale.clone() % r.denom()).is_zero() {
        return r.clone();
    }
    let scaled = r.numer() * &scale;
    Rational::new(scaled.div_floor(r.denom()), scale)
}

/// Smallest multiple of `2^-bits` not below `r`.
pub fn ceil_dyadic(r: &Rational, bits: u32) -> Rational {
    -floor_dyadic(&-r, bits)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

/// `max(x, 0)`.
pub fn plus_part(x: &Rational) -> Rational {
    if x.is_positive() {
        x.clone()
    } else {
        Rational::zero()
    }
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}
