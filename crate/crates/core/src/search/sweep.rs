//! Brute-force sweeps that check the closed-form bounds, and the block
//! compression property, on every small configuration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::compression_blocks;
use crate::counting::{count_triples, EquationSpec};
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};

/// Which inequality a sweep checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum BoundFamily {
    /// `T(A, B, A ∪ B) ≤ 0.15 (|A|+|B|)² + 0.5 (|A|+|B|)` for
    /// `A, B ⊆ [0, span)` with `|A| + |B| ≤ n_max`.
    Main { n_max: usize, span: usize },
    /// Solutions of `a - b = 2c` in `A ⊆ [-span, span]`, `|A| ≤ n_max`,
    /// against `0.5|A|² + 0.5|A|`, and `0.3|A|² + 0.5|A|` when antisymmetric.
    Principal { n_max: usize, span: usize },
    /// Solutions of `a + b = c` against the sharpened product bound for
    /// `A, B, C ⊆ [0, span)` of size at most `size_cap` with
    /// `max(|A|,|B|) ≤ |C| ≤ |A| + |B|`.
    Leqfis { size_cap: usize, span: usize },
    /// `T(A, B, C) ≤ G(|A|, |B|, |C|) + 1/4` on the same family, without the
    /// size precondition.
    Recasting { size_cap: usize, span: usize },
}

impl BoundFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::Main { .. } => "main",
            BoundFamily::Principal { .. } => "principal",
            BoundFamily::Leqfis { .. } => "leqfis",
            BoundFamily::Recasting { .. } => "recasting",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepConfig {
    pub jobs: Option<usize>,
    /// Stop after this many outer units (first-set choices) in this run.
    pub budget: Option<u64>,
    /// First outer unit to process, for resuming a partial sweep.
    pub start: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub sets: Vec<Vec<i64>>,
    pub count: u64,
    /// Name of the bound with the smallest slack at this configuration.
    pub bound: String,
    pub slack: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: BoundFamily,
    pub checked: u64,
    /// First violation in enumeration order; the sweep stops there.
    pub violation: Option<Configuration>,
    /// Configuration of least slack (first in enumeration order on ties).
    pub min_slack: Option<Configuration>,
    pub complete: bool,
    /// Next outer unit when `complete` is false.
    pub cursor: u64,
    pub total_units: u64,
}

/// A slack `num / den` with `den > 0`, compared exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slack {
    num: i64,
    den: i64,
}

impl Slack {
    fn less(&self, other: &Slack) -> bool {
        (self.num as i128) * (other.den as i128) < (other.num as i128) * (self.den as i128)
    }

    fn to_rational(self) -> Rational {
        ratio(self.num, self.den)
    }
}

#[derive(Clone, Debug)]
struct Found {
    masks: Vec<u128>,
    count: u64,
    bound: &'static str,
    slack: Slack,
}

#[derive(Default)]
struct UnitOutcome {
    checked: u64,
    violation: Option<Found>,
    min: Option<Found>,
}

impl UnitOutcome {
    fn observe(&mut self, found: Found) {
        self.checked += 1;
        if found.slack.num < 0 && self.violation.is_none() {
            self.violation = Some(found.clone());
        }
        if self.min.as_ref().is_none_or(|m| found.slack.less(&m.slack)) {
            self.min = Some(found);
        }
    }
}

fn subsets(width: usize, max_size: usize) -> Vec<u128> {
    assert!(width <= 64);
    (0u128..1u128 << width)
        .filter(|m| m.count_ones() as usize <= max_size)
        .collect()
}

/// Spreads bit `i` to bit `2i`.
fn spread2(mask: u128) -> u128 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros();
        out |= 1u128 << (2 * i);
        m &= m - 1;
    }
    out
}

fn bits(mask: u128) -> impl Iterator<Item = u32> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros();
            m &= m - 1;
            i
        })
    })
}

/// `T(A, B, C)` for `a + b = 2c` over `[0, span)`.
fn t_mask(a: u128, b: u128, c2: u128) -> u64 {
    bits(a).map(|x| ((b << x) & c2).count_ones() as u64).sum()
}

/// Solutions of `a + b = c` over `[0, span)`.
fn plain_mask(a: u128, b: u128, c: u128) -> u64 {
    bits(a).map(|x| ((b << x) & c).count_ones() as u64).sum()
}

/// Solutions of `a - b = 2c` in a set on positions `value + span`.
fn diff_mask(a: u128, span: u32) -> u64 {
    let a2 = spread2(a);
    // pos(a) = pos(b) + 2 pos(c) - 2 span
    bits(a)
        .map(|pb| (((a2 << pb) >> (2 * span)) & a).count_ones() as u64)
        .sum()
}

fn values(mask: u128, offset: i64) -> Vec<i64> {
    bits(mask).map(|i| i as i64 + offset).collect()
}

fn n(mask: u128) -> i64 {
    mask.count_ones() as i64
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn reduce(mut acc: UnitOutcome, next: UnitOutcome) -> UnitOutcome {
    // Units are merged in enumeration order; keep the earliest on ties.
    acc.checked += next.checked;
    if acc.violation.is_none() {
        acc.violation = next.violation;
    }
    if let Some(m) = next.min {
        if acc.min.as_ref().is_none_or(|a| m.slack.less(&a.slack)) {
            acc.min = Some(m);
        }
    }
    acc
}

/// Checks one of the closed-form bounds on every configuration of a small
/// family. Stops at the first violation, which would expose a counting bug.
pub fn verify_bounds_exhaustive(family: BoundFamily, cfg: &SweepConfig) -> Result<SweepReport> {
    let (outer, offset): (Vec<u128>, i64) = match family {
        BoundFamily::Main { n_max, span } => {
            check_width(span, 64, "main sweep")?;
            (subsets(span, n_max), 0)
        }
        BoundFamily::Principal { n_max, span } => {
            check_width(span, 21, "principal sweep")?;
            (subsets(2 * span + 1, n_max), -(span as i64))
        }
        BoundFamily::Leqfis { size_cap, span } | BoundFamily::Recasting { size_cap, span } => {
            check_width(span, 32, "triple sweep")?;
            (subsets(span, size_cap), 0)
        }
    };
    let inner = match family {
        BoundFamily::Main { n_max, span } => subsets(span, n_max),
        BoundFamily::Principal { .. } => Vec::new(),
        BoundFamily::Leqfis { size_cap, span } | BoundFamily::Recasting { size_cap, span } => {
            subsets(span, size_cap)
        }
    };

    let eval_unit = |idx: usize| -> UnitOutcome {
        let a = outer[idx];
        let mut out = UnitOutcome::default();
        match family {
            BoundFamily::Main { n_max, .. } => {
                for &b in &inner {
                    let total = n(a) + n(b);
                    if total as usize > n_max {
                        continue;
                    }
                    let count = t_mask(a, b, spread2(a | b));
                    let slack = Slack {
                        num: 3 * total * total + 10 * total - 20 * count as i64,
                        den: 20,
                    };
                    out.observe(Found {
                        masks: vec![a, b],
                        count,
                        bound: "main",
                        slack,
                    });
                }
            }
            BoundFamily::Principal { span, .. } => {
                let size = n(a);
                let count = diff_mask(a, span as u32) as i64;
                let mut slack = Slack {
                    num: size * size + size - 2 * count,
                    den: 2,
                };
                let mut bound = "principal";
                let mirrored = a.reverse_bits() >> (128 - (2 * span + 1));
                if a & mirrored == 0 {
                    let anti = Slack {
                        num: 3 * size * size + 5 * size - 10 * count,
                        den: 10,
                    };
                    if anti.less(&slack) {
                        slack = anti;
                        bound = "antisymmetric";
                    }
                }
                out.observe(Found {
                    masks: vec![a],
                    count: count as u64,
                    bound,
                    slack,
                });
            }
            BoundFamily::Leqfis { .. } => {
                for &b in &inner {
                    for &c in &inner {
                        let (na, nb, nc) = (n(a), n(b), n(c));
                        if nc < na.max(nb) || nc > na + nb {
                            continue;
                        }
                        let count = plain_mask(a, b, c);
                        let gap = na + nb - nc;
                        let slack = Slack {
                            num: 4 * na * nb - gap * gap + 1 - 4 * count as i64,
                            den: 4,
                        };
                        out.observe(Found {
                            masks: vec![a, b, c],
                            count,
                            bound: "leqfis",
                            slack,
                        });
                    }
                }
            }
            BoundFamily::Recasting { .. } => {
                for &b in &inner {
                    for &c in &inner {
                        let count = t_mask(a, b, spread2(c));
                        let mut v = [n(a), n(b), n(c)];
                        v.sort_unstable();
                        let excess = (v[0] + v[1] - v[2]).max(0);
                        let four_g = 4 * v[0] * v[1] - excess * excess;
                        let slack = Slack {
                            num: four_g + 1 - 4 * count as i64,
                            den: 4,
                        };
                        out.observe(Found {
                            masks: vec![a, b, c],
                            count,
                            bound: "recasting",
                            slack,
                        });
                    }
                }
            }
        }
        out
    };

    let total_units = outer.len() as u64;
    let start = cfg.start.min(total_units) as usize;
    let end = match cfg.budget {
        Some(b) => (start as u64 + b).min(total_units) as usize,
        None => outer.len(),
    };
    let outcome = with_pool(cfg.jobs, || {
        (start..end)
            .into_par_iter()
            .map(eval_unit)
            .reduce(UnitOutcome::default, reduce)
    });
    let describe = |f: &Found| Configuration {
        sets: f.masks.iter().map(|&m| values(m, offset_for(&family, m, offset))).collect(),
        count: f.count,
        bound: f.bound.to_string(),
        slack: crate::rational::fmt_rational(&f.slack.to_rational()),
    };
    Ok(SweepReport {
        family,
        checked: outcome.checked,
        violation: outcome.violation.as_ref().map(describe),
        min_slack: outcome.min.as_ref().map(describe),
        complete: end == outer.len(),
        cursor: end as u64,
        total_units,
    })
}

fn offset_for(family: &BoundFamily, _mask: u128, offset: i64) -> i64 {
    match family {
        BoundFamily::Principal { .. } => offset,
        _ => 0,
    }
}

fn check_width(span: usize, max: usize, what: &str) -> Result<()> {
    if span == 0 || span > max {
        return Err(Error::domain(format!("{what} supports 1 <= span <= {max}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub size_cap: usize,
    pub span: usize,
    pub checked: u64,
    /// First triple whose count exceeds its block count.
    pub violation: Option<Configuration>,
    /// Least `block count - count` observed.
    pub min_slack: Option<Configuration>,
}

/// Midpoint of a block of `len` integers nearest to (and not above) `med`.
fn realizable_med(len: usize, med: &Rational) -> Rational {
    let offset = ratio(len as i64 - 1, 2);
    let lo = (med - &offset).floor();
    lo + offset
}

fn block_count(na: usize, nb: usize, nc: usize, med_a: &Rational, med_b: &Rational) -> Result<u64> {
    let (a, b, c) = compression_blocks(
        na,
        nb,
        nc,
        &realizable_med(na, med_a),
        &realizable_med(nb, med_b),
    )?;
    Ok(count_triples(&a, &b, &c, &EquationSpec::plain_sum()).count)
}

/// For every `A, B, C ⊆ [0, span)` of size at most `size_cap`, checks that
/// the solutions of `a + b = c` do not exceed those of the consecutive
/// blocks with matching sizes and aligned midpoints.
pub fn compression_property_scan(size_cap: usize, span: usize, jobs: Option<usize>) -> Result<ScanReport> {
    check_width(span, 32, "compression scan")?;
    let sets = subsets(span, size_cap);
    // Block counts are computed through the generic counting path and only
    // depend on the sizes; medians of [0, span) subsets are always in range.
    let mut cache: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for na in 0..=size_cap {
        for nb in 0..=size_cap {
            for nc in 0..=size_cap {
                let med = |k: usize| ratio(k as i64 - 1, 2);
                cache.insert((na, nb, nc), block_count(na, nb, nc, &med(na), &med(nb))?);
            }
        }
    }

    let eval_unit = |idx: usize| -> Result<UnitOutcome> {
        let a = sets[idx];
        let mut out = UnitOutcome::default();
        let med_of = |m: u128| -> Rational {
            if m == 0 {
                ratio(0, 1)
            } else {
                let lo = m.trailing_zeros() as i64;
                let hi = 127 - m.leading_zeros() as i64;
                ratio(lo + hi, 2)
            }
        };
        for (j, &b) in sets.iter().enumerate() {
            for (k, &c) in sets.iter().enumerate() {
                let count = plain_mask(a, b, c);
                let sizes = (n(a) as usize, n(b) as usize, n(c) as usize);
                let blocks = if idx % 97 == 0 && j % 13 == 0 && k % 7 == 0 {
                    // Spot-check that the cached count matches blocks built
                    // from this triple's own midpoints.
                    let direct = block_count(sizes.0, sizes.1, sizes.2, &med_of(a), &med_of(b))?;
                    debug_assert_eq!(direct, cache[&sizes]);
                    direct
                } else {
                    cache[&sizes]
                };
                out.observe(Found {
                    masks: vec![a, b, c],
                    count,
                    bound: "compression",
                    slack: Slack {
                        num: blocks as i64 - count as i64,
                        den: 1,
                    },
                });
            }
        }
        Ok(out)
    };

    let outcome = with_pool(jobs, || {
        (0..sets.len())
            .into_par_iter()
            .map(eval_unit)
            .try_reduce(UnitOutcome::default, |a, b| Ok(reduce(a, b)))
    })?;
    let describe = |f: &Found| Configuration {
        sets: f.masks.iter().map(|&m| values(m, 0)).collect(),
        count: f.count,
        bound: f.bound.to_string(),
        slack: f.slack.num.to_string(),
    };
    Ok(ScanReport {
        size_cap,
        span,
        checked: outcome.checked,
        violation: outcome.violation.as_ref().map(describe),
        min_slack: outcome.min.as_ref().map(describe),
    })
}
