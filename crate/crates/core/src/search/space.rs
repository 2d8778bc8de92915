//! Bitmask encoding of configurations, canonical-form tests, per
//! configuration counting and the optimistic bound used for pruning.

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Objective, SearchSpec};
use crate::counting::EquationKind;

pub type Mask = u128;

/// The ambient positions of a search and how they map to values.
#[derive(Clone, Debug)]
pub(crate) struct Space {
    pub objective: Objective,
    pub span: i64,
    /// Number of bit positions.
    pub width: usize,
    pub sign: i64,
    /// Multiplier of `c` as `p / q`.
    pub p: i64,
    pub q: i64,
    /// Translation is a symmetry (a + b = 2c only).
    pub translation: bool,
    pub pruning: bool,
}

impl Space {
    pub fn new(spec: &SearchSpec) -> Self {
        let span = spec.span as i64;
        let width = match spec.objective {
            Objective::MaxTUnion => 2 * spec.span,
            Objective::MaxDiff | Objective::MaxDiffAntisym => 2 * spec.span + 1,
        };
        let mult = spec.equation.multiplier();
        let p = mult.numer().to_i64().expect("lambda numerator fits i64");
        let q = mult.denom().to_i64().expect("lambda denominator fits i64");
        let kind = spec.equation.kind();
        let sign = spec.equation.sign();
        let translation = sign > 0 && p == 2 * q;
        // The recasting bound only covers a ± b = 2c.
        let pruning = spec.prune
            && matches!(
                (spec.objective, kind),
                (Objective::MaxTUnion, EquationKind::ApSum)
                    | (Objective::MaxDiff | Objective::MaxDiffAntisym, EquationKind::ApDiff)
            );
        Self {
            objective: spec.objective,
            span,
            width,
            sign,
            p,
            q,
            translation,
            pruning,
        }
    }

    pub fn is_pair(&self) -> bool {
        self.objective == Objective::MaxTUnion
    }

    fn split(&self, mask: Mask) -> (Mask, Mask) {
        let low = (1u128 << self.span) - 1;
        (mask & low, mask >> self.span)
    }

    /// Reflection `x -> -x` on the symmetric ambient interval.
    fn mirror(&self, mask: Mask) -> Mask {
        mask.reverse_bits() >> (128 - self.width)
    }

    fn values(&self, mask: Mask, offset: i64) -> Vec<i64> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let pos = m.trailing_zeros() as i64;
            out.push(pos + offset);
            m &= m - 1;
        }
        out
    }

    /// Decodes a mask to `(A, B)`; for single-set objectives `B` is empty.
    pub fn decode(&self, mask: Mask) -> (Vec<i64>, Vec<i64>) {
        if self.is_pair() {
            let (a, b) = self.split(mask);
            (self.values(a, 0), self.values(b, 0))
        } else {
            (self.values(mask, -self.span), Vec::new())
        }
    }

    /// Whether the configuration is the canonical member of its symmetry
    /// orbit (and satisfies the objective's constraints).
    pub fn is_canonical(&self, mask: Mask) -> bool {
        if self.is_pair() {
            let (a, b) = self.split(mask);
            let union = a | b;
            if union == 0 {
                return true;
            }
            let values = self.values(union, 0);
            if self.translation && values[0] != 0 {
                return false;
            }
            values == [0] || gcd_is_unit(&values)
        } else {
            let values = self.values(mask, -self.span);
            if !(values == [0] || gcd_is_unit(&values)) {
                return false;
            }
            let mirrored = self.mirror(mask);
            if self.objective == Objective::MaxDiffAntisym && mask & mirrored != 0 {
                return false;
            }
            mask >= mirrored
        }
    }

    /// Solutions `(a, b, c)` with `q (a + sign b) = p c`.
    pub fn count(&self, mask: Mask) -> u64 {
        let (a_vals, b_vals, c_mask, c_offset) = if self.is_pair() {
            let (a, b) = self.split(mask);
            (self.values(a, 0), self.values(b, 0), a | b, 0)
        } else {
            let v = self.values(mask, -self.span);
            (v.clone(), v, mask, self.span)
        };
        let limit = if self.is_pair() {
            self.span
        } else {
            self.width as i64
        };
        let mut total = 0;
        for &x in &a_vals {
            for &y in &b_vals {
                let num = self.q * (x + self.sign * y);
                if num % self.p != 0 {
                    continue;
                }
                let pos = num / self.p + c_offset;
                if (0..limit).contains(&pos) && c_mask >> pos & 1 == 1 {
                    total += 1;
                }
            }
        }
        total
    }

    /// An upper bound on the objective over every completion of `prefix`
    /// (positions chosen so far, increasing) with `remaining` more
    /// positions, all larger than the last one.
    pub fn optimistic(&self, prefix: Mask, remaining: u64) -> u64 {
        let known = self.count(prefix);
        if remaining == 0 {
            return known;
        }
        if self.is_pair() {
            let (ka, kb) = self.split(prefix);
            let ka_n = ka.count_ones() as u64;
            let kb_n = kb.count_ones() as u64;
            let k_n = (ka | kb).count_ones() as u64;
            let last = 127 - prefix.leading_zeros() as i64;
            // Unknown positions may still land in A only if the prefix has
            // not reached the B half yet.
            let max_ua = if prefix == 0 || last < self.span - 1 {
                remaining
            } else {
                0
            };
            (0..=max_ua)
                .map(|ua| {
                    let ub = remaining - ua;
                    let mut bound = known;
                    for (xa, xb) in [(ka_n, ub), (ua, kb_n), (ua, ub)] {
                        bound += floor_recast(xa, xb, k_n) + floor_recast(xa, xb, remaining);
                    }
                    bound + floor_recast(ka_n, kb_n, remaining)
                })
                .max()
                .unwrap_or(known)
        } else {
            let k = prefix.count_ones() as u64;
            let r = remaining;
            let mut bound = known;
            // Every pattern in {K, U}^3 except the fully known one.
            for pattern in 1u8..8 {
                let size = |bit: u8| if pattern >> bit & 1 == 1 { r } else { k };
                bound += floor_recast(size(0), size(1), size(2));
            }
            bound
        }
    }
}

fn gcd_is_unit(values: &[i64]) -> bool {
    values.iter().fold(0i64, |g, v| g.gcd(v)) == 1
}

/// `floor(G(x, y, z) + 1/4)` in integer arithmetic.
pub(crate) fn floor_recast(x: u64, y: u64, z: u64) -> u64 {
    let mut v = [x as i128, y as i128, z as i128];
    v.sort_unstable();
    let [xi, eta, zeta] = v;
    let excess = (xi + eta - zeta).max(0);
    let four_g = 4 * xi * eta - excess * excess;
    ((four_g + 1).div_euclid(4)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{recast_bound, EquationSpec};
    use crate::rational::int;

    fn diff_space(span: usize) -> Space {
        Space::new(&SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 3, span))
    }

    fn mask_of(space: &Space, values: &[i64]) -> Mask {
        values
            .iter()
            .map(|v| 1u128 << (v + space.span) as u32)
            .fold(0, |m, b| m | b)
    }

    #[test]
    fn floor_recast_matches_rational_bound() {
        for x in 0..9 {
            for y in 0..9 {
                for z in 0..9 {
                    let exact = recast_bound(x, y, z);
                    let floor = exact.floor().to_integer();
                    assert_eq!(int(floor_recast(x, y, z) as i64).to_integer(), floor);
                }
            }
        }
    }

    #[test]
    fn diff_count_and_canonical_form() {
        let s = diff_space(3);
        let m = mask_of(&s, &[-1, 0, 1]);
        assert_eq!(s.count(m), 5);
        assert!(s.is_canonical(m));
        // {1,3,5} is preferred over its negation.
        let s = diff_space(6);
        assert!(s.is_canonical(mask_of(&s, &[1, 3, 5])));
        assert!(!s.is_canonical(mask_of(&s, &[-5, -3, -1])));
        assert!(!s.is_canonical(mask_of(&s, &[2, 6])));
        assert_eq!(s.count(mask_of(&s, &[1, 3, 5])), 2);
    }

    #[test]
    fn pair_decoding() {
        let s = Space::new(&SearchSpec::new(Objective::MaxTUnion, EquationSpec::ap_sum(), 3, 4));
        let mask = 0b0011 | (0b0101 << 4);
        assert_eq!(s.decode(mask), (vec![0, 1], vec![0, 2]));
        // A∪B = {0,1,2}: (0,0)->0, (0,2)->1, (1,1)->... 1 is not in B, etc.
        assert_eq!(s.count(mask), 2);
        assert!(s.is_canonical(mask));
        assert!(!s.is_canonical(0b0010 | (0b0100 << 4)));
    }
}
