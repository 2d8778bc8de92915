//! Rational interval arithmetic with outward rounding of long endpoints.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::rational::{ceil_dyadic, floor_dyadic, fmt_rational, int, ratio, to_pair, Rational};

/// Endpoints whose denominator exceeds `2^ROUND_BITS` are rounded outward to
/// that dyadic grid.
pub const ROUND_BITS: u32 = 48;

fn too_long(r: &Rational) -> bool {
    r.denom().bits() > u64::from(ROUND_BITS) + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalValue {
    lo: Rational,
    hi: Rational,
}

impl IntervalValue {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        let lo = if too_long(&lo) { floor_dyadic(&lo, ROUND_BITS) } else { lo };
        let hi = if too_long(&hi) { ceil_dyadic(&hi, ROUND_BITS) } else { hi };
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self::new(x.clone(), x)
    }

    pub fn from_ints(lo: i64, hi: i64) -> Self {
        Self::new(int(lo), int(hi))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &IntervalValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &IntervalValue) -> Self {
        Self::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn min(&self, other: &IntervalValue) -> Self {
        Self::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    pub fn max(&self, other: &IntervalValue) -> Self {
        Self::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Self::new(b, a)
        } else {
            Self::new(a, b)
        }
    }

    /// Range of `x²`, tighter than `x * x` when the interval straddles 0.
    pub fn sqr(&self) -> Self {
        let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
        if !self.lo.is_negative() {
            Self::new(a, b)
        } else if !self.hi.is_positive() {
            Self::new(b, a)
        } else {
            Self::new(Rational::zero(), a.max(b))
        }
    }

    /// `max(x, 0)`.
    pub fn plus_part(&self) -> Self {
        let z = Rational::zero();
        Self::new(self.lo.clone().max(z.clone()), self.hi.clone().max(z))
    }

    /// Halves at the midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.mid();
        (
            Self::new(self.lo.clone(), m.clone()),
            Self::new(m, self.hi.clone()),
        )
    }

    /// `[lo_num, lo_den, hi_num, hi_den]` as decimal strings.
    pub fn to_strings(&self) -> [String; 4] {
        let (a, b) = to_pair(&self.lo);
        let (c, d) = to_pair(&self.hi);
        [a, b, c, d]
    }

    pub fn from_strings(parts: &[String]) -> Option<Self> {
        if parts.len() != 4 {
            return None;
        }
        let num = |s: &str| s.parse::<BigInt>().ok();
        let frac = |n: &str, d: &str| {
            let d = num(d)?;
            if d.is_positive() {
                Some(Rational::new(num(n)?, d))
            } else {
                None
            }
        };
        let lo = frac(&parts[0], &parts[1])?;
        let hi = frac(&parts[2], &parts[3])?;
        (lo <= hi).then_some(Self { lo, hi })
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

impl Serialize for IntervalValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl Add for &IntervalValue {
    type Output = IntervalValue;
    fn add(self, rhs: &IntervalValue) -> IntervalValue {
        IntervalValue::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &IntervalValue {
    type Output = IntervalValue;
    fn sub(self, rhs: &IntervalValue) -> IntervalValue {
        IntervalValue::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &IntervalValue {
    type Output = IntervalValue;
    fn neg(self) -> IntervalValue {
        IntervalValue::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &IntervalValue {
    type Output = IntervalValue;
    fn mul(self, rhs: &IntervalValue) -> IntervalValue {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        IntervalValue::new(lo, hi)
    }
}

/// Enclosure of `G` over a box of arguments: the hull, over every argument
/// that can be the largest, of `ξη - (ξ+η-ζ)₊²/4` with that argument as `ζ`.
pub fn g_interval(x: &IntervalValue, y: &IntervalValue, z: &IntervalValue) -> IntervalValue {
    let args = [x, y, z];
    let quarter = ratio(1, 4);
    let mut out: Option<IntervalValue> = None;
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        // args[k] can only be the maximum if it can reach both others.
        if args[k].hi < args[i].lo || args[k].hi < args[j].lo {
            continue;
        }
        let prod = args[i] * args[j];
        let excess = &(args[i] + args[j]) - args[k];
        let branch = &prod - &excess.plus_part().sqr().scale(&quarter);
        out = Some(match out {
            None => branch,
            Some(acc) => acc.hull(&branch),
        });
    }
    out.expect("some argument attains the maximum")
}

/// Convenience for tests and reports.
pub fn interval(lo: Rational, hi: Rational) -> IntervalValue {
    IntervalValue::new(lo, hi)
}
