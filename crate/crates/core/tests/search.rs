use proptest::prelude::*;

use ap_extremal::rational::ratio;
use ap_extremal::search::{
    checkpoint_resume, checkpoint_save, enumerate_max, Objective, RunOptions, SearchOutcome, SearchSpec, SearchState,
    Witness,
};
use ap_extremal::{EquationSpec, Error};

/// All `k`-subsets of `pool`, in lexicographic order.
fn subsets(pool: &[i64], k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        for mut rest in subsets(&pool[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn count(a: &[i64], b: &[i64], c: &[i64], sign: i64, p: i64, q: i64) -> u64 {
    let mut n = 0;
    for &x in a {
        for &y in b {
            if c.iter().any(|&z| q * (x + sign * y) == p * z) {
                n += 1;
            }
        }
    }
    n
}

fn union(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut u: Vec<i64> = a.iter().chain(b).copied().collect();
    u.sort();
    u.dedup();
    u
}

/// Brute-force maximum over the whole search box, no symmetry reduction.
fn oracle(objective: Objective, n: usize, span: usize, sign: i64, p: i64, q: i64) -> u64 {
    let span = span as i64;
    match objective {
        Objective::MaxTUnion => {
            let pool: Vec<i64> = (0..span).collect();
            (0..=n)
                .flat_map(|k| {
                    let bs = subsets(&pool, n - k);
                    subsets(&pool, k)
                        .into_iter()
                        .flat_map(move |a| bs.clone().into_iter().map(move |b| (a.clone(), b)))
                })
                .map(|(a, b)| count(&a, &b, &union(&a, &b), sign, p, q))
                .max()
                .unwrap_or(0)
        }
        _ => {
            let pool: Vec<i64> = (-span..=span).collect();
            subsets(&pool, n)
                .into_iter()
                .filter(|a| objective != Objective::MaxDiffAntisym || a.iter().all(|x| !a.contains(&-x)))
                .map(|a| count(&a, &a, &a, sign, p, q))
                .max()
                .unwrap_or(0)
        }
    }
}

fn run(spec: &SearchSpec, jobs: usize) -> SearchOutcome {
    enumerate_max(
        spec,
        RunOptions {
            jobs: Some(jobs),
            ..Default::default()
        },
    )
    .unwrap()
}

fn witness_value(w: &Witness, sign: i64, p: i64, q: i64) -> u64 {
    match &w.b {
        Some(b) => count(&w.a, b, &union(&w.a, b), sign, p, q),
        None => count(&w.a, &w.a, &w.a, sign, p, q),
    }
}

#[test]
fn small_examples() {
    let spec = SearchSpec::new(Objective::MaxDiffAntisym, EquationSpec::ap_diff(), 3, 10);
    let out = run(&spec, 1);
    assert_eq!(out.best, 2);
    assert!(out.witnesses.iter().any(|w| w.a == [1, 3, 5]));

    let spec = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 3, 1);
    let out = run(&spec, 1);
    assert_eq!(out.best, 5);
    assert_eq!(out.witnesses[0].a, [-1, 0, 1]);

    // the singleton pair {0}, {0}: 0 + 0 = 2 * 0
    let spec = SearchSpec::new(Objective::MaxTUnion, EquationSpec::ap_sum(), 2, 1);
    let out = run(&spec, 1);
    assert_eq!(out.best, 1);
    assert_eq!(out.witnesses[0].a, [0]);
    assert_eq!(out.witnesses[0].b.as_deref(), Some(&[0][..]));
}

#[test]
fn interval_is_extremal_for_small_sizes() {
    // |A| = 2m + 1 reaches (m + 1)^2 + m^2 at [-m, m]
    for m in 1..=2i64 {
        let n = (2 * m + 1) as usize;
        let spec = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), n, 2 * n);
        let out = run(&spec, 2);
        assert_eq!(out.best as i64, (m + 1) * (m + 1) + m * m);
    }
}

#[test]
fn empty_configurations_are_rejected() {
    let spec = SearchSpec::new(Objective::MaxTUnion, EquationSpec::ap_sum(), 0, 3);
    assert!(matches!(enumerate_max(&spec, RunOptions::default()), Err(Error::Domain(_))));
}

#[test]
fn checkpoint_file_round_trip() {
    let spec = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 4, 8);
    let straight = run(&spec, 2);
    let dir = std::env::temp_dir().join(format!("ap-extremal-search-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.json");
    let mut resume: Option<SearchState> = None;
    let mut stops = 0;
    let out = loop {
        let opts = RunOptions {
            jobs: Some(2),
            budget: Some(2_000),
            resume: resume.take(),
            checkpoint: Some(&path),
        };
        match enumerate_max(&spec, opts) {
            Ok(out) => break out,
            Err(Error::BudgetExceeded(state)) => {
                stops += 1;
                checkpoint_save(&state, &path).unwrap();
                resume = Some(checkpoint_resume(&path).unwrap());
            }
            Err(e) => panic!("{e}"),
        }
    };
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(stops > 0);
    assert_eq!(out.best, straight.best);
    assert_eq!(out.witnesses, straight.witnesses);
    assert_eq!(out.truncated, straight.truncated);
}

#[test]
fn resume_rejects_other_spec() {
    let spec = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 4, 8);
    let Err(Error::BudgetExceeded(state)) = enumerate_max(
        &spec,
        RunOptions {
            budget: Some(10),
            ..Default::default()
        },
    ) else {
        panic!("expected the budget to run out");
    };
    let other = SearchSpec::new(Objective::MaxDiff, EquationSpec::ap_diff(), 4, 9);
    let res = enumerate_max(
        &other,
        RunOptions {
            resume: Some(*state),
            ..Default::default()
        },
    );
    assert!(res.is_err());
}

/// `(objective, equation, sign, p, q, n, span)`
fn small_search() -> impl Strategy<Value = (Objective, EquationSpec, i64, i64, i64, usize, usize)> {
    let eq = prop_oneof![
        Just((EquationSpec::ap_sum(), 1, 2, 1)),
        Just((EquationSpec::ap_diff(), -1, 2, 1)),
        Just((EquationSpec::plain_sum(), 1, 1, 1)),
        Just((EquationSpec::lambda_sum(ratio(3, 1)).unwrap(), 1, 3, 1)),
        Just((EquationSpec::lambda_diff(ratio(3, 2)).unwrap(), -1, 3, 2)),
    ];
    let objective = prop_oneof![
        Just(Objective::MaxTUnion),
        Just(Objective::MaxDiff),
        Just(Objective::MaxDiffAntisym)
    ];
    (objective, eq, 0usize..=4, 1usize..=5).prop_map(|(o, (e, s, p, q), n, span)| {
        let span = if o == Objective::MaxTUnion { span + 1 } else { span };
        (o, e, s, p, q, n, span)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_brute_force((objective, eq, sign, p, q, n, span) in small_search()) {
        let spec = SearchSpec::new(objective, eq, n, span);
        prop_assume!(spec.validate().is_ok());
        let out = run(&spec, 2);
        prop_assert_eq!(out.best, oracle(objective, n, span, sign, p, q));
        for w in &out.witnesses {
            prop_assert_eq!(witness_value(w, sign, p, q), out.best);
        }
    }

    #[test]
    fn pruning_and_workers_do_not_change_results((objective, eq, _s, _p, _q, n, span) in small_search()) {
        let mut spec = SearchSpec::new(objective, eq, n, span + 1);
        prop_assume!(spec.validate().is_ok());
        let base = run(&spec, 1);
        let parallel = run(&spec, 3);
        prop_assert_eq!(&base.witnesses, &parallel.witnesses);
        prop_assert_eq!(base.best, parallel.best);
        spec.prune = false;
        prop_assert_eq!(run(&spec, 2).best, base.best);
    }

    #[test]
    fn interrupted_runs_resume((objective, eq, _s, _p, _q, n, span) in small_search(), budget in 1u64..200) {
        let spec = SearchSpec::new(objective, eq, n, span + 1);
        prop_assume!(spec.validate().is_ok());
        let straight = run(&spec, 1);
        let mut resume = None;
        let out = loop {
            let opts = RunOptions { jobs: Some(2), budget: Some(budget), resume: resume.take(), checkpoint: None };
            match enumerate_max(&spec, opts) {
                Ok(out) => break out,
                Err(Error::BudgetExceeded(state)) => resume = Some(*state),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        };
        prop_assert_eq!(out.best, straight.best);
        prop_assert_eq!(out.witnesses, straight.witnesses);
    }
}
