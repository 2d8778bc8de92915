//! Branch and bound over boxes, certificates and their replay.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_token, Rational};

use super::interval::IntervalValue;
use super::targets::{target_by_name, Target};

pub const CERTIFICATE_VERSION: &str = concat!("ap-extremal ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafMethod {
    /// Interval enclosure below the threshold.
    Interval,
    /// Exact piecewise-quadratic maximum below the threshold.
    Piecewise,
    /// The box misses a constraint half-space entirely.
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    /// Bisection choices from the root, `0` = lower half.
    pub path: String,
    #[serde(rename = "box")]
    pub region: Vec<[String; 4]>,
    pub bound: Option<String>,
    pub method: LeafMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub point: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStats {
    pub boxes_processed: u64,
    pub max_depth: usize,
    pub interval_leaves: usize,
    pub piecewise_leaves: usize,
    pub outside_leaves: usize,
    /// Leaves whose bound exceeds `threshold - tol`.
    pub near_maximal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub tool: String,
    pub target: String,
    pub labels: Vec<String>,
    pub threshold: String,
    pub tol: String,
    pub root: Vec<[String; 4]>,
    pub leaf_count: usize,
    /// Largest recorded leaf bound.
    pub max_bound: String,
    pub witness: Option<WitnessPoint>,
    pub leaves: Vec<Leaf>,
    pub stats: CertificateStats,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Replay(format!("unreadable certificate: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivingBox {
    pub path: String,
    #[serde(rename = "box")]
    pub region: Vec<[String; 4]>,
    pub bound: String,
}

/// Returned when the budget runs out before every box is closed. Not a
/// disproof: the surviving boxes simply need more subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub target: String,
    pub threshold: String,
    pub tol: String,
    pub boxes_processed: u64,
    pub surviving_count: usize,
    /// Worst surviving boxes first, at most `SURVIVOR_LIMIT`.
    pub surviving: Vec<SurvivingBox>,
}

const SURVIVOR_LIMIT: usize = 100;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub tol: Rational,
    /// Maximum number of boxes to examine.
    pub budget: u64,
    pub jobs: Option<usize>,
    /// Depth from which the exact piecewise bound is attempted.
    pub piecewise_depth: usize,
}

pub const DEFAULT_CERTIFY_BUDGET: u64 = 2_000_000;

impl CertifyOptions {
    pub fn new(tol: Rational) -> Self {
        Self {
            tol,
            budget: DEFAULT_CERTIFY_BUDGET,
            jobs: None,
            piecewise_depth: 0,
        }
    }
}

enum Outcome {
    Leaf(LeafMethod, Option<Rational>),
    Split(Rational),
}

fn outside(target: &Target, region: &[IntervalValue]) -> bool {
    target
        .constraints
        .iter()
        .any(|c| c.enclose(region).hi() < &Rational::zero())
}

fn classify(target: &Target, region: &[IntervalValue], depth: usize, limit: &Rational, piecewise_depth: usize) -> Outcome {
    if outside(target, region) {
        return Outcome::Leaf(LeafMethod::Outside, None);
    }
    let hi = target.expr.quick_upper(region);
    if &hi <= limit {
        return Outcome::Leaf(LeafMethod::Interval, Some(hi));
    }
    if depth >= piecewise_depth && target.expr.piecewise_at_most(region, &target.constraints, limit) {
        return Outcome::Leaf(LeafMethod::Piecewise, Some(limit.clone()));
    }
    Outcome::Split(hi)
}

/// Widest side, lowest index on ties.
fn split_dim(region: &[IntervalValue]) -> usize {
    let mut best = 0;
    for i in 1..region.len() {
        if region[i].width() > region[best].width() {
            best = i;
        }
    }
    best
}

fn children(region: &[IntervalValue]) -> (Vec<IntervalValue>, Vec<IntervalValue>) {
    let d = split_dim(region);
    let (a, b) = region[d].bisect();
    let mut left = region.to_vec();
    let mut right = region.to_vec();
    left[d] = a;
    right[d] = b;
    (left, right)
}

fn encode(region: &[IntervalValue]) -> Vec<[String; 4]> {
    region.iter().map(IntervalValue::to_strings).collect()
}

struct Pending {
    bound: Rational,
    path: String,
    region: Vec<IntervalValue>,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pending {
    /// Worst bound first, then by path.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .cmp(&other.bound)
            .then_with(|| other.path.cmp(&self.path))
    }
}

const BATCH: usize = 512;

/// Proves `sup { expr(y) : y ∈ root, constraints(y) ≥ 0 } ≤ threshold + tol`.
///
/// The leaf set depends only on the target, threshold, tolerance and
/// options other than `jobs`.
pub fn certify_sup(target: &Target, threshold: &Rational, opts: &CertifyOptions) -> Result<Certificate> {
    if opts.tol <= Rational::zero() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let limit = threshold + &opts.tol;
    let mut pending = BinaryHeap::new();
    pending.push(Pending {
        bound: target.expr.quick_upper(&target.root),
        path: String::new(),
        region: target.root.clone(),
    });
    let mut leaves: Vec<(Leaf, Option<Rational>)> = Vec::new();
    let mut processed = 0u64;
    let mut max_depth = 0;

    let run = |batch: &[Pending]| -> Vec<Outcome> {
        batch
            .par_iter()
            .map(|p| classify(target, &p.region, p.path.len(), &limit, opts.piecewise_depth))
            .collect()
    };
    let pool = opts
        .jobs
        .map(|j| rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build().expect("thread pool"));

    while !pending.is_empty() {
        if processed >= opts.budget {
            return Err(Error::CertificationFailed(Box::new(failure(target, threshold, &opts.tol, processed, pending))));
        }
        let take = (BATCH as u64).min(opts.budget - processed) as usize;
        let mut batch = Vec::with_capacity(take);
        while batch.len() < take {
            match pending.pop() {
                Some(p) => batch.push(p),
                None => break,
            }
        }
        let outcomes = match &pool {
            Some(pool) => pool.install(|| run(&batch)),
            None => run(&batch),
        };
        processed += batch.len() as u64;
        for (p, outcome) in batch.into_iter().zip(outcomes) {
            max_depth = max_depth.max(p.path.len());
            match outcome {
                Outcome::Leaf(method, bound) => leaves.push((
                    Leaf {
                        path: p.path,
                        region: encode(&p.region),
                        bound: bound.as_ref().map(fmt_rational),
                        method,
                    },
                    bound,
                )),
                Outcome::Split(bound) => {
                    let (l, r) = children(&p.region);
                    for (bit, region) in [('0', l), ('1', r)] {
                        let mut path = p.path.clone();
                        path.push(bit);
                        pending.push(Pending {
                            bound: bound.clone(),
                            path,
                            region,
                        });
                    }
                }
            }
        }
    }

    leaves.sort_by(|a, b| a.0.path.cmp(&b.0.path));
    let floor = threshold - &opts.tol;
    let count = |m: LeafMethod| leaves.iter().filter(|(l, _)| l.method == m).count();
    let stats = CertificateStats {
        boxes_processed: processed,
        max_depth,
        interval_leaves: count(LeafMethod::Interval),
        piecewise_leaves: count(LeafMethod::Piecewise),
        outside_leaves: count(LeafMethod::Outside),
        near_maximal: leaves.iter().filter(|(_, b)| b.as_ref().is_some_and(|b| b > &floor)).count(),
    };
    let max_bound = leaves
        .iter()
        .filter_map(|(_, b)| b.clone())
        .max()
        .unwrap_or_else(|| threshold.clone());
    let witness = target.witness.as_ref().and_then(|w| {
        let value = target.expr.eval(w);
        (target.inside(w) && value >= floor).then(|| WitnessPoint {
            point: w.iter().map(fmt_rational).collect(),
            value: fmt_rational(&value),
        })
    });
    Ok(Certificate {
        tool: CERTIFICATE_VERSION.to_string(),
        target: target.name.to_string(),
        labels: target.labels.iter().map(|s| s.to_string()).collect(),
        threshold: fmt_rational(threshold),
        tol: fmt_rational(&opts.tol),
        root: encode(&target.root),
        leaf_count: leaves.len(),
        max_bound: fmt_rational(&max_bound),
        witness,
        leaves: leaves.into_iter().map(|(l, _)| l).collect(),
        stats,
    })
}

fn failure(target: &Target, threshold: &Rational, tol: &Rational, processed: u64, pending: BinaryHeap<Pending>) -> FailureReport {
    let sorted = pending.into_sorted_vec();
    let surviving_count = sorted.len();
    FailureReport {
        target: target.name.to_string(),
        threshold: fmt_rational(threshold),
        tol: fmt_rational(tol),
        boxes_processed: processed,
        surviving_count,
        surviving: sorted
            .into_iter()
            .rev()
            .take(SURVIVOR_LIMIT)
            .map(|p| SurvivingBox {
                path: p.path,
                region: encode(&p.region),
                bound: fmt_rational(&p.bound),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub target: String,
    pub leaves: usize,
    pub max_bound: String,
}

fn rat(s: &str, what: &str) -> Result<Rational> {
    parse_token(s).ok_or_else(|| Error::Replay(format!("bad {what} `{s}`")))
}

/// Re-derives every leaf box from its path, re-checks its bound with the
/// recorded method, and checks that the leaves tile the root box.
/// Single-threaded.
pub fn replay(cert: &Certificate) -> Result<ReplayReport> {
    let target = target_by_name(&cert.target).map_err(|e| Error::Replay(e.to_string()))?;
    let threshold = rat(&cert.threshold, "threshold")?;
    let tol = rat(&cert.tol, "tolerance")?;
    let limit = &threshold + &tol;
    if cert.root != encode(&target.root) {
        return Err(Error::Replay("root box differs from the target's".into()));
    }
    if cert.leaf_count != cert.leaves.len() {
        return Err(Error::Replay("leaf count does not match the leaf list".into()));
    }
    check_tiling(cert.leaves.iter().map(|l| l.path.as_str()))?;
    let mut max_bound: Option<Rational> = None;
    for leaf in &cert.leaves {
        let mut region = target.root.clone();
        for bit in leaf.path.chars() {
            let (l, r) = children(&region);
            region = if bit == '0' { l } else { r };
        }
        if encode(&region) != leaf.region {
            return Err(Error::Replay(format!("leaf {} box does not match its path", leaf.path)));
        }
        let fail = |why: &str| Err(Error::Replay(format!("leaf {}: {why}", leaf.path)));
        match leaf.method {
            LeafMethod::Outside => {
                if !outside(&target, &region) {
                    return fail("box is not outside the constraints");
                }
            }
            LeafMethod::Interval => {
                let hi = target.expr.quick_upper(&region);
                let recorded = rat(leaf.bound.as_deref().unwrap_or(""), "bound")?;
                if hi != recorded {
                    return fail("recomputed enclosure differs from the recorded bound");
                }
                if hi > limit {
                    return fail("bound exceeds threshold + tol");
                }
            }
            LeafMethod::Piecewise => {
                let recorded = rat(leaf.bound.as_deref().unwrap_or(""), "bound")?;
                if recorded > limit || !target.expr.piecewise_at_most(&region, &target.constraints, &recorded) {
                    return fail("piecewise bound does not hold");
                }
            }
        }
        if let Some(b) = &leaf.bound {
            let b = rat(b, "bound")?;
            if max_bound.as_ref().is_none_or(|m| &b > m) {
                max_bound = Some(b);
            }
        }
    }
    Ok(ReplayReport {
        target: cert.target.clone(),
        leaves: cert.leaves.len(),
        max_bound: fmt_rational(&max_bound.unwrap_or(threshold)),
    })
}

/// Paths must form the leaves of a full binary tree: prefix-free with
/// `Σ 2^-len = 1`.
fn check_tiling<'a>(paths: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut sorted: Vec<&str> = paths.collect();
    if sorted.iter().any(|p| p.chars().any(|c| c != '0' && c != '1')) {
        return Err(Error::Replay("leaf path with characters other than 0/1".into()));
    }
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[1].starts_with(w[0]) {
            return Err(Error::Replay(format!("leaf {} overlaps leaf {}", w[0], w[1])));
        }
    }
    let mut total = Rational::zero();
    for p in &sorted {
        total += Rational::new(1.into(), num_bigint::BigInt::from(1) << p.len());
    }
    if total != Rational::from_integer(1.into()) {
        return Err(Error::Replay("leaves do not cover the root box".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::verifier::targets::{claim1, claim2_v};

    fn opts() -> CertifyOptions {
        CertifyOptions::new(ratio(1, 1_000_000_000))
    }

    #[test]
    fn tiling_checks() {
        assert!(check_tiling(["0", "10", "11"].into_iter()).is_ok());
        assert!(check_tiling([""].into_iter()).is_ok());
        assert!(check_tiling(["0", "10"].into_iter()).is_err());
        assert!(check_tiling(["0", "01", "1"].into_iter()).is_err());
    }

    #[test]
    fn claim1_certifies_and_replays() {
        let t = claim1();
        let cert = certify_sup(&t, &t.threshold, &opts()).unwrap();
        assert_eq!(cert.witness.as_ref().unwrap().value, "3/20");
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let r = replay(&back).unwrap();
        assert_eq!(r.leaves, cert.leaf_count);
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let t = claim2_v();
        let cert = certify_sup(&t, &t.threshold, &opts()).unwrap();
        let mut bad = cert.clone();
        bad.leaves.pop();
        bad.leaf_count -= 1;
        assert!(replay(&bad).is_err());
        let mut bad = cert.clone();
        if let Some(l) = bad.leaves.iter_mut().find(|l| l.method == LeafMethod::Interval) {
            l.bound = Some("-1".into());
            assert!(replay(&bad).is_err());
        }
    }

    #[test]
    fn too_low_threshold_fails_with_survivors() {
        let t = claim1();
        let mut o = opts();
        o.budget = 2_000;
        let err = certify_sup(&t, &ratio(149, 1000), &o).unwrap_err();
        match err {
            Error::CertificationFailed(report) => {
                assert!(report.surviving_count > 0);
                assert!(!report.surviving.is_empty());
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn jobs_do_not_change_certificates() {
        let t = claim1();
        let mut a = opts();
        a.jobs = Some(1);
        let mut b = opts();
        b.jobs = Some(4);
        assert_eq!(
            certify_sup(&t, &t.threshold, &a).unwrap().to_json(),
            certify_sup(&t, &t.threshold, &b).unwrap().to_json()
        );
    }
}
