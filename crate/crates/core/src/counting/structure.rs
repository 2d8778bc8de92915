//! Residue-class structure of integer sets: parity profiles, the parity
//! decomposition of `T(A, B, A ∪ B)` and the two case bounds for
//! `T(A, -A, A)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{count_diff, count_only, g_exact, BoundCheck, CountMethod, EquationSpec};
use crate::error::{Error, Result};
use crate::numset::{integer_gcd, negate, NumSet};
use crate::rational::{int, ratio, Rational};

/// Sizes of the classes mod 2 (`m0`, `m1`) and mod 4: `m_ij` counts the
/// elements congruent to `i + 2j` modulo 4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParityProfile {
    pub m0: u64,
    pub m1: u64,
    pub m00: u64,
    pub m01: u64,
    pub m10: u64,
    pub m11: u64,
}

impl ParityProfile {
    pub fn total(&self) -> u64 {
        self.m0 + self.m1
    }
}

fn residue4(x: &BigInt) -> u8 {
    // mod_floor is already in {0,1,2,3} for negative x.
    let r = x.mod_floor(&BigInt::from(4));
    u8::try_from(&r).expect("residue fits")
}

pub fn parity_profile(a: &NumSet) -> Result<ParityProfile> {
    let mut p = ParityProfile::default();
    for x in a.integers()? {
        match residue4(&x) {
            0 => p.m00 += 1,
            1 => p.m10 += 1,
            2 => p.m01 += 1,
            _ => p.m11 += 1,
        }
    }
    p.m0 = p.m00 + p.m01;
    p.m1 = p.m10 + p.m11;
    Ok(p)
}

fn parity_class(s: &NumSet, odd: bool) -> NumSet {
    s.filter(|x| x.numer().is_odd() == odd)
}

fn t_union(a: &NumSet, b: &NumSet, c: &NumSet) -> u64 {
    count_only(a, b, c, &EquationSpec::ap_sum(), CountMethod::Auto)
}

/// Checks `T(A,B,A∪B) = T(A0,B0,A0∪B0) + T(A0,B0,A1∪B1) + T(A1,B1,A∪B)`.
/// A `false` return means the counting code is wrong.
pub fn decomposition_check(a: &NumSet, b: &NumSet) -> Result<bool> {
    if !a.is_integral() || !b.is_integral() {
        return Err(Error::domain("decomposition_check needs integer sets"));
    }
    let ab = a.union(b);
    let (a0, a1) = (parity_class(a, false), parity_class(a, true));
    let (b0, b1) = (parity_class(b, false), parity_class(b, true));
    let lhs = t_union(a, b, &ab);
    let rhs = t_union(&a0, &b0, &a0.union(&b0))
        + t_union(&a0, &b0, &a1.union(&b1))
        + t_union(&a1, &b1, &ab);
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseCheck {
    /// `m1² + 2G(m00, m01, m1) + 1/2 + m0²/2 + m0/2`, used when `m0 ≥ m1`.
    EvenMajority(BoundCheck),
    /// `m0² + G(m10, m10, m0) + G(m11, m11, m0) + 1/2 + 2 m10 m11`, used
    /// when `m1 ≥ m0`.
    OddMajority(BoundCheck),
}

impl CaseCheck {
    pub fn bound(&self) -> &BoundCheck {
        match self {
            CaseCheck::EvenMajority(b) | CaseCheck::OddMajority(b) => b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    /// The set after dividing by the gcd of its elements.
    pub normalized: Option<NumSet>,
    pub profile: Option<ParityProfile>,
    /// `T(A, -A, A)`, i.e. the number of solutions of `a - b = 2c` in `A`.
    pub count: u64,
    pub checks: Vec<CaseCheck>,
    pub note: Option<String>,
}

impl CaseReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.bound().violated())
    }
}

fn u(v: u64) -> Rational {
    int(v as i64)
}

/// Normalises `A` (divide by the gcd of the elements) and checks
/// `T(A, -A, A)` against the even-majority and/or odd-majority case bound.
/// When the normalisation `m00 ≤ m01` cannot be reached the check is
/// skipped and the report carries a note.
pub fn case_bound_checks(a: &NumSet) -> Result<CaseReport> {
    let ints = a.integers()?;
    let count = count_diff(a).count;
    let skipped = |normalized, profile, note: &str| CaseReport {
        normalized,
        profile,
        count,
        checks: Vec::new(),
        note: Some(note.to_string()),
    };

    let gcd = integer_gcd(&ints);
    if gcd.is_zero() {
        return Ok(skipped(None, None, "set is empty or {0}; no normalisation with m0 < m applies"));
    }
    let normalized = if gcd.is_one() {
        a.clone()
    } else {
        NumSet::from_integers(
            ints.iter()
                .map(|x| i64::try_from(x / &gcd).expect("normalised element fits i64")),
        )
    };
    let mut profile = parity_profile(&normalized)?;
    if profile.m0 == profile.total() {
        return Err(Error::domain(
            "internal: every element is even after dividing by the gcd",
        ));
    }
    if profile.m00 > profile.m01 {
        // Negation fixes both even classes mod 4, so it cannot help here.
        let flipped = parity_profile(&negate(&normalized))?;
        if flipped.m00 > flipped.m01 {
            return Ok(skipped(
                Some(normalized),
                Some(profile),
                "m00 > m01 after gcd reduction; negation preserves the even classes mod 4",
            ));
        }
        profile = flipped;
    }
    debug_assert_eq!(count_diff(&normalized).count, count);

    let p = profile;
    let mut checks = Vec::new();
    if p.m0 >= p.m1 {
        let value = u(p.m1 * p.m1)
            + int(2) * g_exact(&u(p.m00), &u(p.m01), &u(p.m1))
            + ratio(1, 2)
            + u(p.m0 * p.m0) / int(2)
            + u(p.m0) / int(2);
        checks.push(CaseCheck::EvenMajority(BoundCheck::new("case-even", value, count)));
    }
    if p.m1 >= p.m0 {
        let value = u(p.m0 * p.m0)
            + g_exact(&u(p.m10), &u(p.m10), &u(p.m0))
            + g_exact(&u(p.m11), &u(p.m11), &u(p.m0))
            + ratio(1, 2)
            + u(2 * p.m10 * p.m11);
        checks.push(CaseCheck::OddMajority(BoundCheck::new("case-odd", value, count)));
    }
    Ok(CaseReport {
        normalized: Some(normalized),
        profile: Some(p),
        count,
        checks,
        note: None,
    })
}
