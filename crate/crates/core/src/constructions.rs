//! Sharp examples and consecutive-integer block families.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numset::NumSet;
use crate::rational::{int, ratio, Rational};

/// `{1, ..., m} ∪ {m+2, m+4, ..., 4m}` for even `m ≥ 2`.
///
/// It has `5m/2` elements and exactly `15m²/8 - 5m/4` solutions of
/// `a - b = 2c`.
pub fn staircase(m: i64) -> Result<NumSet> {
    if m <= 0 || m % 2 != 0 {
        return Err(Error::domain(format!(
            "staircase needs an even m >= 2, got {m}"
        )));
    }
    Ok(NumSet::from_integers(
        (1..=m).chain((m + 2..=4 * m).step_by(2)),
    ))
}

/// `15m²/8 - 5m/4`.
pub fn staircase_count(m: i64) -> Rational {
    ratio(15 * m * m, 8) - ratio(5 * m, 4)
}

/// `{-m, ..., m}` for `m ≥ 1`; it has `(m+1)² + m²` solutions of
/// `a - b = 2c`.
pub fn symmetric_interval(m: i64) -> Result<NumSet> {
    if m <= 0 {
        return Err(Error::domain(format!(
            "symmetric_interval needs m >= 1, got {m}"
        )));
    }
    Ok(NumSet::from_integers(-m..=m))
}

/// Consecutive integers `lo, lo+1, ..., lo+len-1`.
fn block(lo: &BigInt, len: usize) -> NumSet {
    NumSet::from_rationals((0..len).map(|k| Rational::from_integer(lo + BigInt::from(k))))
}

/// Lowest element of a block of `len` consecutive integers whose midpoint is
/// `med`, if one exists.
fn block_start(len: usize, med: &Rational, label: &str) -> Result<BigInt> {
    let lo = med - ratio(len as i64 - 1, 2);
    if !lo.is_integer() {
        return Err(Error::domain(format!(
            "median {med} of {label} is not realizable by {len} consecutive integers"
        )));
    }
    Ok(lo.to_integer())
}

/// Blocks `A'`, `B'`, `C'` of consecutive integers with the requested sizes,
/// `med(A') = med_a`, `med(B') = med_b` and `med(C')` within 1/2 of
/// `med_a + med_b`. Among admissible placements of `C'` the one closest to
/// `med_a + med_b` wins, ties going to the smaller midpoint. Empty blocks
/// ignore their median.
pub fn compression_blocks(
    na: usize,
    nb: usize,
    nc: usize,
    med_a: &Rational,
    med_b: &Rational,
) -> Result<(NumSet, NumSet, NumSet)> {
    let a = if na == 0 {
        NumSet::empty()
    } else {
        block(&block_start(na, med_a, "A'")?, na)
    };
    let b = if nb == 0 {
        NumSet::empty()
    } else {
        block(&block_start(nb, med_b, "B'")?, nb)
    };
    if nc == 0 {
        return Ok((a, b, NumSet::empty()));
    }
    // med(C') = lo + (nc-1)/2 ranges over a shifted integer lattice.
    let target = med_a + med_b;
    let offset = ratio(nc as i64 - 1, 2);
    let ideal = &target - &offset;
    let lo_down = ideal.floor().to_integer();
    let lo_up = ideal.ceil().to_integer();
    let dist = |lo: &BigInt| (Rational::from_integer(lo.clone()) + &offset - &target).abs();
    let lo = if dist(&lo_down) <= dist(&lo_up) {
        lo_down
    } else {
        lo_up
    };
    debug_assert!(dist(&lo) <= ratio(1, 2));
    Ok((a, b, block(&lo, nc)))
}

/// The midpoint of a block of `len` consecutive integers starting at 0.
pub fn origin_block_med(len: usize) -> Rational {
    if len == 0 {
        int(0)
    } else {
        ratio(len as i64 - 1, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_diff;
    use crate::numset::is_antisymmetric;

    fn set(v: &[i64]) -> NumSet {
        NumSet::from_integers(v.iter().copied())
    }

    #[test]
    fn staircase_examples() {
        let s = staircase(2).unwrap();
        assert_eq!(s, set(&[1, 2, 4, 6, 8]));
        assert_eq!(count_diff(&s).count, 5);
        assert_eq!(staircase_count(2), int(5));
        let s = staircase(4).unwrap();
        assert_eq!(s, set(&[1, 2, 3, 4, 6, 8, 10, 12, 14, 16]));
        assert_eq!(count_diff(&s).count, 25);
        assert_eq!(staircase_count(4), int(25));
        assert!(staircase(3).is_err());
        assert!(staircase(0).is_err());
        assert!(staircase(-2).is_err());
    }

    #[test]
    fn staircase_parity_census() {
        for m in (2..=20).step_by(2) {
            let s = staircase(m).unwrap();
            let ints = s.to_i64s().unwrap();
            let odd = ints.iter().filter(|x| *x % 2 != 0).count() as i64;
            let even = ints.iter().filter(|x| *x % 2 == 0).count() as i64;
            let div4 = ints.iter().filter(|x| *x % 4 == 0).count() as i64;
            assert_eq!((odd, even, div4), (m / 2, 2 * m, m), "m = {m}");
            assert_eq!(s.len() as i64 * 2, 5 * m);
        }
    }

    #[test]
    fn symmetric_interval_examples() {
        let s = symmetric_interval(1).unwrap();
        assert_eq!(s, set(&[-1, 0, 1]));
        assert_eq!(count_diff(&s).count, 5);
        assert!(!is_antisymmetric(&s));
        assert_eq!(count_diff(&symmetric_interval(2).unwrap()).count, 13);
        assert!(symmetric_interval(0).is_err());
    }

    #[test]
    fn compression_examples() {
        let (a, b, c) = compression_blocks(3, 3, 3, &int(1), &int(1)).unwrap();
        assert_eq!(a, set(&[0, 1, 2]));
        assert_eq!(b, set(&[0, 1, 2]));
        assert_eq!(c, set(&[1, 2, 3]));

        let (a, b, c) = compression_blocks(1, 1, 1, &int(0), &int(0)).unwrap();
        assert_eq!((a, b, c), (set(&[0]), set(&[0]), set(&[0])));

        let half = ratio(1, 2);
        let (a, b, c) = compression_blocks(2, 2, 1, &half, &half).unwrap();
        assert_eq!((a, b, c), (set(&[0, 1]), set(&[0, 1]), set(&[1])));
    }

    #[test]
    fn compression_tie_goes_to_smaller_median() {
        // med_a + med_b = 1 is off the lattice of 2-element midpoints.
        let (_, _, c) = compression_blocks(1, 1, 2, &int(0), &int(1)).unwrap();
        assert_eq!(c, set(&[0, 1]));
        assert_eq!(c.med().unwrap(), ratio(1, 2));
    }

    #[test]
    fn compression_rejects_unrealizable_median() {
        let err = compression_blocks(2, 1, 1, &int(1), &int(0)).unwrap_err();
        assert!(err.to_string().contains("not realizable"));
        assert!(compression_blocks(3, 1, 1, &ratio(1, 2), &int(0)).is_err());
    }
}
