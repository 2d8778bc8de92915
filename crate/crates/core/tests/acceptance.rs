//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ap_extremal::constructions::{staircase, symmetric_interval};
use ap_extremal::counting::decomposition_check;
use ap_extremal::rational::{int, ratio};
use ap_extremal::search::{
    checkpoint_resume, checkpoint_save, compression_property_scan, enumerate_max, verify_bounds_exhaustive,
    BoundFamily, Objective, RunOptions, SearchSpec, SweepConfig,
};
use ap_extremal::verifier::{
    certify_sup, claim1, claim2_u, claim2_v, critical_point_report, lemma_inequality, replay, verify_balancing_identity,
    verify_xy_lemma, CertifyOptions, Target,
};
use ap_extremal::{count_diff, g_exact, Error, NumSet};

type Check = Result<String, String>;

/// (id, title, runtime target in seconds, check)
type Criterion = (u32, &'static str, Option<u64>, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Brute-force count of `a - b = 2c` in `A`.
fn naive_diff(a: &[i64]) -> u64 {
    let mut n = 0;
    for &x in a {
        for &y in a {
            for &z in a {
                if x - y == 2 * z {
                    n += 1;
                }
            }
        }
    }
    n
}

fn ints(s: &NumSet) -> Vec<i64> {
    s.to_i64s().expect("integer set")
}

fn c1() -> Check {
    let a = g_exact(&int(9), &int(6), &int(7));
    let b = g_exact(&int(7), &int(14), &int(6));
    ensure(a == int(38) && b == int(42), format!("G(9,6,7) = {a}, G(7,14,6) = {b}"))?;
    Ok("G(9,6,7) = 38, G(7,14,6) = 42".into())
}

fn c2() -> Check {
    for m in (2..=20i64).step_by(2) {
        let a = staircase(m).map_err(|e| e.to_string())?;
        let n = a.len() as i64;
        let count = count_diff(&a).count;
        let formula = ratio(15 * m * m, 8) - ratio(5 * m, 4);
        ensure(int(count as i64) == formula, format!("m = {m}: count {count}, formula {formula}"))?;
        ensure(formula == ratio(3 * n * n, 10) - ratio(n, 2), format!("m = {m}: |A| form differs"))?;
        ensure(count == naive_diff(&ints(&a)), format!("m = {m}: brute force differs"))?;
    }
    Ok("m = 2, 4, ..., 20".into())
}

fn c3() -> Check {
    for m in 1..=50i64 {
        let a = symmetric_interval(m).map_err(|e| e.to_string())?;
        let count = count_diff(&a).count as i64;
        ensure(count == (m + 1) * (m + 1) + m * m, format!("m = {m}: count {count}"))?;
    }
    // brute force on a few sizes
    for m in [1, 7, 20] {
        let a = symmetric_interval(m).unwrap();
        ensure(naive_diff(&ints(&a)) == count_diff(&a).count, format!("m = {m}: brute force differs"))?;
    }
    Ok("m = 1..50".into())
}

fn sweep(family: BoundFamily) -> Check {
    let report = verify_bounds_exhaustive(
        family,
        &SweepConfig {
            jobs: Some(4),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(report.complete, "sweep incomplete")?;
    if let Some(v) = &report.violation {
        return Err(format!("violation at {:?}", v.sets));
    }
    let least = report
        .min_slack
        .map(|m| format!(", least slack {} ({})", m.slack, m.bound))
        .unwrap_or_default();
    Ok(format!("{} configurations, 0 violations{least}", report.checked))
}

fn c4() -> Check {
    sweep(BoundFamily::Main { n_max: 7, span: 10 })
}

fn c5() -> Check {
    sweep(BoundFamily::Principal { n_max: 5, span: 6 })
}

fn c6() -> Check {
    sweep(BoundFamily::Leqfis { size_cap: 5, span: 8 })
}

fn c7() -> Check {
    sweep(BoundFamily::Recasting { size_cap: 5, span: 8 })
}

fn tol() -> ap_extremal::Rational {
    ratio(1, 1_000_000_000)
}

fn certify_and_replay(t: &Target) -> Result<ap_extremal::verifier::Certificate, String> {
    let cert = certify_sup(t, &t.threshold, &CertifyOptions::new(tol())).map_err(|e| e.to_string())?;
    let r = replay(&cert).map_err(|e| e.to_string())?;
    ensure(r.max_bound == cert.max_bound, format!("{}: replayed bound {} != {}", t.name, r.max_bound, cert.max_bound))?;
    ensure(r.leaves == cert.leaf_count, format!("{}: leaf count differs on replay", t.name))?;
    Ok(cert)
}

fn c8() -> Check {
    let cert = certify_and_replay(&lemma_inequality())?;
    let w = cert.witness.as_ref().ok_or("no witness reported")?;
    ensure(w.value == "3/20", format!("witness value {}", w.value))?;
    ensure(w.point == vec!["1/5"; 4], format!("witness point {:?}", w.point))?;
    Ok(format!(
        "sup f <= 3/20 + 1e-9 with {} leaves, replayed; f(1/5,1/5,1/5,1/5) = 3/20",
        cert.leaf_count
    ))
}

fn c9() -> Check {
    let u = certify_and_replay(&claim2_u())?;
    let v = certify_and_replay(&claim2_v())?;
    let cp = critical_point_report();
    ensure(cp.confirmed(), format!("{cp:?}"))?;
    Ok(format!(
        "u and v <= -1/10 + 1e-9 ({} + {} leaves); critical points (3/10, 1/10), (7/20, 3/20)",
        u.leaf_count, v.leaf_count
    ))
}

fn c10() -> Check {
    let (identity, inequality) = verify_balancing_identity(100_000, 2024);
    let xy = verify_xy_lemma(100_000, 2025);
    for r in [&identity, &inequality, &xy] {
        ensure(r.passed() && r.checked == 100_000, format!("{}: {} failures", r.name, r.failure_count))?;
    }
    let mut rng = StdRng::seed_from_u64(2026);
    let random_set = |rng: &mut StdRng| {
        let k = rng.gen_range(0..=8);
        NumSet::from_integers((0..k).map(|_| rng.gen_range(-20..=20)))
    };
    for i in 0..10_000 {
        let a = random_set(&mut rng);
        let b = random_set(&mut rng);
        ensure(matches!(decomposition_check(&a, &b), Ok(true)), format!("decomposition fails on pair {i}: {a} {b}"))?;
    }
    Ok("1e5 balancing, 1e5 x=y samples, 1e4 decompositions".into())
}

fn c11() -> Check {
    let r = compression_property_scan(3, 6, Some(4)).map_err(|e| e.to_string())?;
    if let Some(v) = &r.violation {
        return Err(format!("violation at {:?}", v.sets));
    }
    Ok(format!("{} triples, 0 violations", r.checked))
}

fn c12() -> Check {
    // search: worker counts
    let spec = SearchSpec::new(Objective::MaxDiffAntisym, Objective::MaxDiffAntisym.default_equation(), 5, 12);
    let run = |jobs| {
        enumerate_max(
            &spec,
            RunOptions {
                jobs: Some(jobs),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())
    };
    let (one, four) = (run(1)?, run(4)?);
    ensure(one.best == four.best && one.witnesses == four.witnesses, "search differs across jobs")?;

    // search: interrupt, save, resume
    let path = std::env::temp_dir().join(format!("ap-extremal-acceptance-{}.json", std::process::id()));
    let mut resume = None;
    let mut stops = 0;
    let resumed = loop {
        match enumerate_max(
            &spec,
            RunOptions {
                jobs: Some(4),
                budget: Some(5_000),
                resume: resume.take(),
                checkpoint: None,
            },
        ) {
            Ok(out) => break out,
            Err(Error::BudgetExceeded(state)) => {
                stops += 1;
                checkpoint_save(&state, &path).map_err(|e| e.to_string())?;
                resume = Some(checkpoint_resume(&path).map_err(|e| e.to_string())?);
            }
            Err(e) => return Err(e.to_string()),
        }
    };
    let _ = std::fs::remove_file(&path);
    ensure(stops > 0, "budget never interrupted the search")?;
    ensure(resumed.best == one.best && resumed.witnesses == one.witnesses, "resumed search differs")?;

    // verify: worker counts
    for t in [claim1(), claim2_u(), claim2_v()] {
        let mut opts = CertifyOptions::new(tol());
        let mut docs = Vec::new();
        for jobs in [1, 4] {
            opts.jobs = Some(jobs);
            docs.push(certify_sup(&t, &t.threshold, &opts).map_err(|e| e.to_string())?.to_json());
        }
        ensure(docs[0] == docs[1], format!("{} certificate differs across jobs", t.name))?;
    }
    Ok(format!(
        "search and certificates identical for jobs 1 and 4; resume after {stops} interruptions matches"
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "G golden values", None, c1),
        (2, "staircase sharpness", Some(1), c2),
        (3, "interval sharpness", Some(5), c3),
        (4, "main bound sweep", Some(120), c4),
        (5, "principal and antisymmetric sweep", Some(120), c5),
        (6, "sharpened product bound sweep", Some(300), c6),
        (7, "recasting sweep", None, c7),
        (8, "certified four-variable inequality", Some(300), c8),
        (9, "certified u and v regions", Some(60), c9),
        (10, "exact identity suites", None, c10),
        (11, "compression scan", Some(120), c11),
        (12, "determinism and resume", None, c12),
    ];
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let over = limit.is_some_and(|s| took > Duration::from_secs(s));
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {}s runtime target", limit.unwrap())),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {status} {title} ({:.2}s): {detail}", took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
