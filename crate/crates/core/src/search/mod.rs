//! Exhaustive extremal search and brute-force bound sweeps.
//!
//! Configurations are bitmasks over a bounded ambient interval. The
//! enumeration visits sorted position tuples in lexicographic order and only
//! evaluates configurations in canonical form. The tree is cut into work
//! units by its depth-2 prefixes; units are the checkpoint granule and are
//! merged strictly in order, so results do not depend on the worker count.

mod checkpoint;
mod space;
mod sweep;

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::EquationSpec;
use crate::error::{Error, Result};
use crate::rational::fmt_rational;

pub use checkpoint::{checkpoint_resume, checkpoint_save, CHECKPOINT_VERSION};
pub use space::Mask;
pub use sweep::{
    compression_property_scan, verify_bounds_exhaustive, BoundFamily, Configuration, ScanReport,
    SweepConfig, SweepReport,
};

use space::Space;

pub const DEFAULT_WITNESS_CAP: usize = 64;
/// Units evaluated between merges and checkpoints.
const CHUNK_UNITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Maximise `T(A, B, A ∪ B)` over `A, B ⊆ [0, span)` with `|A| + |B| = n`.
    MaxTUnion,
    /// Maximise the solutions in `A` over `A ⊆ [-span, span]`, `|A| = n`.
    MaxDiff,
    /// As `MaxDiff`, restricted to antisymmetric `A`.
    MaxDiffAntisym,
}

impl Objective {
    pub fn name(&self) -> &'static str {
        match self {
            Objective::MaxTUnion => "max-t-union",
            Objective::MaxDiff => "max-diff",
            Objective::MaxDiffAntisym => "max-diff-antisym",
        }
    }

    /// The equation a search counts unless told otherwise.
    pub fn default_equation(&self) -> EquationSpec {
        match self {
            Objective::MaxTUnion => EquationSpec::ap_sum(),
            _ => EquationSpec::ap_diff(),
        }
    }

    /// `2n` for pair objectives, `4n` for the single-set ones.
    pub fn default_span(&self, n: usize) -> usize {
        match self {
            Objective::MaxTUnion => 2 * n,
            _ => 4 * n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub objective: Objective,
    pub equation: EquationSpec,
    pub n: usize,
    pub span: usize,
    /// Discard prefixes whose optimistic completion cannot reach the
    /// incumbent. Only used for `a ± b = 2c`.
    pub prune: bool,
    pub witness_cap: usize,
}

impl SearchSpec {
    pub fn new(objective: Objective, equation: EquationSpec, n: usize, span: usize) -> Self {
        Self {
            objective,
            equation,
            n,
            span,
            prune: true,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("search needs n >= 1"));
        }
        if self.span == 0 {
            return Err(Error::domain("search needs span >= 1"));
        }
        let width = match self.objective {
            Objective::MaxTUnion => {
                if self.span > 64 {
                    return Err(Error::domain("pair searches support span <= 64"));
                }
                2 * self.span
            }
            _ => {
                if self.span > 63 {
                    return Err(Error::domain("single-set searches support span <= 63"));
                }
                2 * self.span + 1
            }
        };
        if self.n > width {
            return Err(Error::domain(format!(
                "n = {} exceeds the {width} ambient positions",
                self.n
            )));
        }
        Ok(())
    }

    /// Stable textual echo stored in checkpoints.
    pub fn echo(&self) -> String {
        let lambda = self
            .equation
            .lambda()
            .map(fmt_rational)
            .unwrap_or_else(|| "-".into());
        format!(
            "objective={};eq={:?};lambda={};n={};span={};prune={};cap={}",
            self.objective.name(),
            self.equation.kind(),
            lambda,
            self.n,
            self.span,
            self.prune,
            self.witness_cap
        )
    }
}

/// Resumable progress of a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    pub version: String,
    pub spec_echo: String,
    /// Index of the next unprocessed work unit.
    pub cursor: u64,
    pub total_units: u64,
    pub best: Option<u64>,
    /// Maximisers found so far, ascending mask order, capped.
    pub witnesses: Vec<Mask>,
    /// Configurations (including pruned prefixes) examined so far.
    pub examined: u64,
}

impl SearchState {
    pub fn fresh(spec: &SearchSpec) -> Self {
        Self {
            version: CHECKPOINT_VERSION.to_string(),
            spec_echo: spec.echo(),
            cursor: 0,
            total_units: units(spec.n, width(spec)).len() as u64,
            best: None,
            witnesses: Vec::new(),
            examined: 0,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cursor >= self.total_units
    }
}

/// A maximising configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: Vec<i64>,
    /// Present only for pair objectives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub best: u64,
    pub witnesses: Vec<Witness>,
    /// More maximisers exist than the cap allowed to keep.
    pub truncated: bool,
    pub examined: u64,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions<'a> {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Stop after examining this many configurations in this run.
    pub budget: Option<u64>,
    /// Continue from a saved state instead of starting fresh.
    pub resume: Option<SearchState>,
    /// Persist the state here after every chunk of units.
    pub checkpoint: Option<&'a Path>,
}

fn width(spec: &SearchSpec) -> usize {
    match spec.objective {
        Objective::MaxTUnion => 2 * spec.span,
        _ => 2 * spec.span + 1,
    }
}

/// Depth-2 prefixes (depth 1 when `n == 1`) of all `n`-subsets of
/// `0..width`, in lexicographic order.
fn units(n: usize, width: usize) -> Vec<Vec<usize>> {
    if n > width {
        return Vec::new();
    }
    if n == 1 {
        return (0..width).map(|i| vec![i]).collect();
    }
    let mut out = Vec::new();
    for first in 0..=width - n {
        for second in first + 1..=width - n + 1 {
            out.push(vec![first, second]);
        }
    }
    out
}

struct UnitResult {
    best: Option<u64>,
    witnesses: Vec<Mask>,
    examined: u64,
}

struct Walker<'s> {
    space: &'s Space,
    n: usize,
    cap: usize,
    incumbent: &'s AtomicU64,
    best: Option<u64>,
    witnesses: Vec<Mask>,
    examined: u64,
}

impl Walker<'_> {
    fn record(&mut self, mask: Mask, value: u64) {
        match self.best {
            Some(b) if value < b => return,
            Some(b) if value == b => {}
            _ => {
                self.best = Some(value);
                self.witnesses.clear();
            }
        }
        self.witnesses.push(mask);
        if self.witnesses.len() > 2 * self.cap {
            self.witnesses.sort_unstable();
            self.witnesses.truncate(self.cap + 1);
        }
        self.incumbent.fetch_max(value, Ordering::Relaxed);
    }

    fn walk(&mut self, mask: Mask, depth: usize, next: usize) {
        self.examined += 1;
        if depth == self.n {
            if self.space.is_canonical(mask) {
                let value = self.space.count(mask);
                self.record(mask, value);
            }
            return;
        }
        if self.space.pruning {
            let bound = self.space.optimistic(mask, (self.n - depth) as u64);
            // Strict: ties must survive so every maximiser is reported.
            if bound < self.incumbent.load(Ordering::Relaxed) {
                return;
            }
        }
        let remaining = self.n - depth;
        for pos in next..=self.space.width - remaining {
            self.walk(mask | 1u128 << pos, depth + 1, pos + 1);
        }
    }
}

fn run_unit(space: &Space, spec: &SearchSpec, prefix: &[usize], incumbent: &AtomicU64) -> UnitResult {
    let mut walker = Walker {
        space,
        n: spec.n,
        cap: spec.witness_cap,
        incumbent,
        best: None,
        witnesses: Vec::new(),
        examined: 0,
    };
    let mask = prefix.iter().fold(0u128, |m, &p| m | 1u128 << p);
    walker.walk(mask, prefix.len(), prefix.last().map_or(0, |p| p + 1));
    let mut witnesses = walker.witnesses;
    witnesses.sort_unstable();
    witnesses.truncate(spec.witness_cap + 1);
    UnitResult {
        best: walker.best,
        witnesses,
        examined: walker.examined,
    }
}

fn merge(state: &mut SearchState, unit: UnitResult, cap: usize) {
    state.examined += unit.examined;
    let Some(value) = unit.best else { return };
    match state.best {
        Some(b) if value < b => return,
        Some(b) if value == b => state.witnesses.extend(unit.witnesses),
        _ => {
            state.best = Some(value);
            state.witnesses = unit.witnesses;
        }
    }
    state.witnesses.sort_unstable();
    state.witnesses.dedup();
    // One extra entry records that the list was truncated.
    state.witnesses.truncate(cap + 1);
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

/// Exact maximum of the objective over all canonical configurations inside
/// the span, with its maximisers in ascending mask order.
///
/// On budget exhaustion returns [`Error::BudgetExceeded`] carrying a state
/// that `RunOptions::resume` accepts.
pub fn enumerate_max(spec: &SearchSpec, opts: RunOptions<'_>) -> Result<SearchOutcome> {
    spec.validate()?;
    let space = Space::new(spec);
    let all_units = units(spec.n, space.width);
    let mut state = match opts.resume {
        Some(s) => {
            if s.spec_echo != spec.echo() {
                return Err(Error::CheckpointMismatch(format!(
                    "saved `{}`, requested `{}`",
                    s.spec_echo,
                    spec.echo()
                )));
            }
            s
        }
        None => SearchState::fresh(spec),
    };
    let incumbent = AtomicU64::new(state.best.unwrap_or(0));
    let start_examined = state.examined;

    with_pool(opts.jobs, || -> Result<()> {
        while (state.cursor as usize) < all_units.len() {
            if let Some(budget) = opts.budget {
                if state.examined - start_examined >= budget {
                    return Err(Error::BudgetExceeded(Box::new(state.clone())));
                }
            }
            let lo = state.cursor as usize;
            let hi = (lo + CHUNK_UNITS).min(all_units.len());
            let results: Vec<UnitResult> = all_units[lo..hi]
                .par_iter()
                .map(|prefix| run_unit(&space, spec, prefix, &incumbent))
                .collect();
            for r in results {
                merge(&mut state, r, spec.witness_cap);
            }
            state.cursor = hi as u64;
            if let Some(path) = opts.checkpoint {
                checkpoint_save(&state, path)?;
            }
        }
        Ok(())
    })?;

    let truncated = state.witnesses.len() > spec.witness_cap;
    let witnesses = state
        .witnesses
        .iter()
        .take(spec.witness_cap)
        .map(|&m| {
            let (a, b) = space.decode(m);
            Witness {
                a,
                b: space.is_pair().then_some(b),
            }
        })
        .collect();
    Ok(SearchOutcome {
        best: state.best.unwrap_or(0),
        witnesses,
        truncated,
        examined: state.examined,
    })
}

/// Result of growing the span until the maximum stops changing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanSweep {
    /// `(span, best)` for every span tried.
    pub history: Vec<(usize, u64)>,
    /// Best unchanged over three consecutive span increments. Even then the
    /// value is only an empirical global maximum.
    pub stabilized: bool,
}

/// Runs [`enumerate_max`] for spans `start..=max_span` and stops once the
/// best value has been unchanged for three consecutive increments.
pub fn span_sweep(spec: &SearchSpec, start: usize, max_span: usize, jobs: Option<usize>) -> Result<SpanSweep> {
    let mut history = Vec::new();
    let mut unchanged = 0;
    for span in start..=max_span {
        let s = SearchSpec { span, ..spec.clone() };
        let out = enumerate_max(
            &s,
            RunOptions {
                jobs,
                ..Default::default()
            },
        )?;
        if history.last().is_some_and(|&(_, b)| b == out.best) {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        history.push((span, out.best));
        if unchanged >= 3 {
            return Ok(SpanSweep {
                history,
                stabilized: true,
            });
        }
    }
    Ok(SpanSweep {
        history,
        stabilized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_prefixes_cover_all_subsets() {
        // Every 3-subset of 0..6 extends exactly one prefix.
        let us = units(3, 6);
        let mut total = 0;
        for u in &us {
            let left = 6 - u[1] - 1;
            total += left;
        }
        assert_eq!(total, 20);
        assert_eq!(units(1, 4).len(), 4);
        assert!(units(5, 4).is_empty());
    }

    #[test]
    fn spec_validation() {
        let ok = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 3, 10);
        assert!(ok.validate().is_ok());
        assert!(SearchSpec { n: 0, ..ok.clone() }.validate().is_err());
        assert!(SearchSpec { span: 0, ..ok.clone() }.validate().is_err());
        assert!(SearchSpec { span: 64, ..ok.clone() }.validate().is_err());
        assert!(SearchSpec { n: 22, span: 10, ..ok }.validate().is_err());
    }
}
