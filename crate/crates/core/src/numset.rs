//! Finite sets of exact rationals, the set file format, affine images and
//! reduction to integer sets.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_token, Rational};

/// A finite set of rationals, stored strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NumSet {
    elems: Vec<Rational>,
}

impl NumSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_rationals(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut elems: Vec<Rational> = values.into_iter().collect();
        elems.sort();
        elems.dedup();
        Self { elems }
    }

    pub fn from_integers(values: impl IntoIterator<Item = i64>) -> Self {
        Self::from_rationals(
            values
                .into_iter()
                .map(|v| Rational::from_integer(BigInt::from(v))),
        )
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elems.iter()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.elems.last()
    }

    /// `(min + max) / 2`, the midpoint used for block alignment. Not the
    /// statistical median.
    pub fn med(&self) -> Option<Rational> {
        Some((self.min()? + self.max()?) / Rational::from_integer(BigInt::from(2)))
    }

    pub fn union(&self, other: &NumSet) -> NumSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.elems.len() && j < other.elems.len() {
            match self.elems[i].cmp(&other.elems[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.elems[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.elems[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.elems[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.elems[i..]);
        out.extend_from_slice(&other.elems[j..]);
        NumSet { elems: out }
    }

    pub fn filter(&self, mut keep: impl FnMut(&Rational) -> bool) -> NumSet {
        NumSet {
            elems: self.elems.iter().filter(|x| keep(x)).cloned().collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.elems.iter().all(|x| x.is_integer())
    }

    /// The elements as machine integers, if every element is an integer that
    /// fits.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.elems
            .iter()
            .map(|x| if x.is_integer() { x.numer().to_i64() } else { None })
            .collect()
    }

    /// Integer elements as `BigInt`s, or a domain error naming the first
    /// non-integer.
    pub fn integers(&self) -> Result<Vec<BigInt>> {
        self.elems
            .iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.numer().clone())
                } else {
                    Err(Error::domain(format!(
                        "element {} is not an integer",
                        fmt_rational(x)
                    )))
                }
            })
            .collect()
    }
}

impl fmt::Display for NumSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rational(x))?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Rational> for NumSet {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        Self::from_rationals(iter)
    }
}

/// `x -> scale * x + shift` with a nonzero scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    scale: Rational,
    shift: Rational,
}

impl AffineMap {
    pub fn new(scale: Rational, shift: Rational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::domain("affine map scale must be nonzero"));
        }
        Ok(Self { scale, shift })
    }

    pub fn identity() -> Self {
        Self {
            scale: Rational::one(),
            shift: Rational::zero(),
        }
    }

    pub fn dilation(scale: Rational) -> Result<Self> {
        Self::new(scale, Rational::zero())
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.scale * x + &self.shift
    }
}

/// Parses the set file format: one token per line, or a single bracketed
/// comma-separated list. `#` starts a comment. An empty document is the
/// empty set.
pub fn parse_set(text: &str) -> Result<NumSet> {
    // Strip comments, keep 1-based line numbers for diagnostics.
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let line = line.strip_suffix('\r').unwrap_or(line);
            let body = line.split_once('#').map_or(line, |(b, _)| b);
            (i + 1, body.trim())
        })
        .filter(|(_, body)| !body.is_empty())
        .collect();

    let bracketed = lines.first().is_some_and(|(_, b)| b.starts_with('['));
    let mut values = Vec::new();
    if bracketed {
        let last = lines.len() - 1;
        if !lines[last].1.ends_with(']') {
            let (line, body) = lines[last];
            return Err(Error::Parse {
                line,
                token: body.to_string(),
            });
        }
        for (idx, &(line, body)) in lines.iter().enumerate() {
            let mut body = body;
            if idx == 0 {
                body = &body[1..];
            }
            if idx == last {
                body = &body[..body.len() - 1];
            }
            for token in body.split(',').map(str::trim) {
                if token.is_empty() {
                    // Tolerate a trailing comma or an empty list, nothing else.
                    if body.trim().is_empty() || body.trim_end().ends_with(',') {
                        continue;
                    }
                    return Err(Error::Parse {
                        line,
                        token: body.to_string(),
                    });
                }
                let value = parse_token(token).ok_or_else(|| Error::Parse {
                    line,
                    token: token.to_string(),
                })?;
                values.push(value);
            }
        }
    } else {
        for (line, body) in lines {
            let value = parse_token(body).ok_or_else(|| Error::Parse {
                line,
                token: body.to_string(),
            })?;
            values.push(value);
        }
    }
    Ok(NumSet::from_rationals(values))
}

/// Writes the set file format, one element per line.
pub fn format_set(s: &NumSet) -> String {
    let mut out = String::new();
    for x in s.iter() {
        out.push_str(&fmt_rational(x));
        out.push('\n');
    }
    out
}

pub fn affine_image(s: &NumSet, m: &AffineMap) -> NumSet {
    NumSet::from_rationals(s.iter().map(|x| m.apply(x)))
}

pub fn negate(s: &NumSet) -> NumSet {
    // Negation reverses order, so no re-sort is needed.
    NumSet {
        elems: s.elems.iter().rev().map(|x| -x).collect(),
    }
}

pub fn is_antisymmetric(s: &NumSet) -> bool {
    s.iter().all(|x| !s.contains(&-x))
}

/// Dilates every set by the least common denominator of all their elements.
/// All counted equations are homogeneous, so every count is preserved.
pub fn to_integer_sets(sets: &[NumSet]) -> (Vec<NumSet>, Rational) {
    let lcm = sets
        .iter()
        .flat_map(|s| s.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = Rational::from_integer(lcm);
    let out = sets
        .iter()
        .map(|s| NumSet {
            elems: s.iter().map(|x| x * &scale).collect(),
        })
        .collect();
    (out, scale)
}

/// gcd of the absolute values of the elements (0 for `{}` and `{0}`).
pub fn integer_gcd(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()))
}
