//! Integer counting kernels.
//!
//! Every equation is normalised to `q * (a + sign * b) = p * c` over integer
//! sets, with `p / q` the (positive) multiplier of `c`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Which kernel to use for an integer count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Pick the convolution path when it is applicable and cheaper.
    Auto,
    /// Iterate all pairs and probe a hash index of `C`.
    Pairwise,
    /// Histogram of `A + sign * B` via number-theoretic convolution.
    /// Falls back to pairwise when a set spans more than `MAX_CONV_SPAN`.
    Convolution,
}

pub const MAX_CONV_SPAN: i64 = 1 << 20;

/// Elements at or below this magnitude keep every intermediate inside i64.
const SMALL_LIMIT: i64 = 1 << 40;

pub(crate) struct Normalized<'a> {
    pub a: &'a [BigInt],
    pub b: &'a [BigInt],
    pub c: &'a [BigInt],
    pub sign: i64,
    pub p: &'a BigInt,
    pub q: &'a BigInt,
}

pub(crate) fn count(eq: &Normalized<'_>, method: CountMethod) -> u64 {
    if eq.a.is_empty() || eq.b.is_empty() || eq.c.is_empty() {
        return 0;
    }
    let small = |v: &[BigInt]| -> Option<Vec<i64>> {
        v.iter()
            .map(|x| x.to_i64().filter(|y| y.abs() <= SMALL_LIMIT))
            .collect()
    };
    let coeff = |x: &BigInt| x.to_i64().filter(|&y| y <= 1 << 20);
    match (small(eq.a), small(eq.b), small(eq.c), coeff(eq.p), coeff(eq.q)) {
        (Some(a), Some(b), Some(c), Some(p), Some(q)) => {
            let conv_ok = span(&a) <= MAX_CONV_SPAN
                && span(&b) <= MAX_CONV_SPAN
                && span(&c) <= MAX_CONV_SPAN;
            let use_conv = match method {
                CountMethod::Pairwise => false,
                CountMethod::Convolution => conv_ok,
                CountMethod::Auto => {
                    conv_ok && {
                        let n = (span(&a) + span(&b) + 2) as f64;
                        (a.len() as f64) * (b.len() as f64) > 24.0 * n * n.log2().max(1.0)
                    }
                }
            };
            if use_conv {
                count_convolution(&a, &b, &c, eq.sign, p, q)
            } else {
                count_pairwise_small(&a, &b, &c, eq.sign, p, q)
            }
        }
        _ => count_pairwise_big(eq),
    }
}

fn span(v: &[i64]) -> i64 {
    // Inputs are sorted.
    v.last().unwrap() - v.first().unwrap()
}

fn count_pairwise_small(a: &[i64], b: &[i64], c: &[i64], sign: i64, p: i64, q: i64) -> u64 {
    let index: HashSet<i64> = c.iter().copied().collect();
    let mut total = 0u64;
    for &x in a {
        for &y in b {
            let num = q * (x + sign * y);
            if num % p == 0 && index.contains(&(num / p)) {
                total += 1;
            }
        }
    }
    total
}

fn count_pairwise_big(eq: &Normalized<'_>) -> u64 {
    let index: HashSet<&BigInt> = eq.c.iter().collect();
    let mut total = 0u64;
    for x in eq.a {
        for y in eq.b {
            let sum = if eq.sign > 0 { x + y } else { x - y };
            let (quot, rem) = (eq.q * sum).div_rem(eq.p);
            if rem.is_zero() && index.contains(&quot) {
                total += 1;
            }
        }
    }
    total
}

fn count_convolution(a: &[i64], b: &[i64], c: &[i64], sign: i64, p: i64, q: i64) -> u64 {
    let b_signed: Vec<i64> = if sign > 0 {
        b.to_vec()
    } else {
        b.iter().rev().map(|y| -y).collect()
    };
    let a0 = a[0];
    let b0 = b_signed[0];
    let mut fa = vec![0u64; (span(a) + 1) as usize];
    for &x in a {
        fa[(x - a0) as usize] = 1;
    }
    let mut fb = vec![0u64; (span(&b_signed) + 1) as usize];
    for &y in &b_signed {
        fb[(y - b0) as usize] = 1;
    }
    let hist = ntt::convolve(&fa, &fb);
    let base = a0 + b0;
    c.iter()
        .filter_map(|&z| {
            // q * s = p * z  =>  s = p * z / q
            let pz = p * z;
            if pz % q != 0 {
                return None;
            }
            let idx = pz / q - base;
            (0..hist.len() as i64)
                .contains(&idx)
                .then(|| hist[idx as usize])
        })
        .sum()
}

mod ntt {
    const MOD: u64 = 998_244_353;
    const ROOT: u64 = 3;

    fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= MOD;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % MOD;
            }
            base = base * base % MOD;
            exp >>= 1;
        }
        acc
    }

    fn transform(a: &mut [u64], invert: bool) {
        let n = a.len();
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = pow_mod(ROOT, (MOD - 1) / len as u64);
            if invert {
                w = pow_mod(w, MOD - 2);
            }
            for start in (0..n).step_by(len) {
                let mut wn = 1u64;
                for k in 0..len / 2 {
                    let u = a[start + k];
                    let v = a[start + k + len / 2] * wn % MOD;
                    a[start + k] = (u + v) % MOD;
                    a[start + k + len / 2] = (u + MOD - v) % MOD;
                    wn = wn * w % MOD;
                }
            }
            len <<= 1;
        }
        if invert {
            let inv_n = pow_mod(n as u64, MOD - 2);
            for x in a.iter_mut() {
                *x = *x * inv_n % MOD;
            }
        }
    }

    /// Exact convolution of 0/1 sequences. Every output entry is bounded by
    /// the shorter input length, far below the modulus.
    pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
        let out_len = a.len() + b.len() - 1;
        let n = out_len.next_power_of_two();
        let mut fa = a.to_vec();
        fa.resize(n, 0);
        let mut fb = b.to_vec();
        fb.resize(n, 0);
        transform(&mut fa, false);
        transform(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = *x * y % MOD;
        }
        transform(&mut fa, true);
        fa.truncate(out_len);
        fa
    }

    #[cfg(test)]
    mod tests {
        #[test]
        fn small_convolution() {
            assert_eq!(super::convolve(&[1, 1], &[1, 0, 1]), vec![1, 1, 1, 1]);
            assert_eq!(super::convolve(&[1, 1, 1], &[1, 1, 1]), vec![1, 2, 3, 2, 1]);
        }
    }
}
