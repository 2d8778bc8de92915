use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use ap_extremal::rational::ratio;
use ap_extremal::search::{compression_property_scan, verify_bounds_exhaustive, BoundFamily, Configuration, SweepConfig};
use ap_extremal::verifier::{
    certify_sup, critical_point_report, replay, target_by_name, verify_balancing_identity, verify_xy_lemma,
    Certificate, CertifyOptions, FailureReport, IdentityReport, DEFAULT_CERTIFY_BUDGET,
};
use ap_extremal::{Error, Rational};

use crate::config::parse_enum;
use crate::output::{parse_rational, row, structured, table};
use crate::{Common, Failure, Format, EXIT_BUDGET, EXIT_CERTIFICATION, EXIT_VIOLATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// f ≤ 3/20 on the four-variable domain
    #[value(name = "lemma-inequality")]
    LemmaInequality,
    /// f(x0, x1, x1, x0) ≤ 3/20
    #[value(name = "claim1")]
    Claim1,
    /// u ≤ -1/10 on the part of the triangle above x1 = φ x0
    #[value(name = "claim2-u")]
    Claim2U,
    /// v ≤ -1/10 on the part of the triangle below x1 = φ x0
    #[value(name = "claim2-v")]
    Claim2V,
    /// G balancing identity and inequality on random triples
    #[value(name = "balancing")]
    Balancing,
    /// G(x, x, z) ≤ xz - z²/4 on random pairs
    #[value(name = "xy-lemma")]
    XyLemma,
    /// Exact critical points of u and v
    #[value(name = "critical-points")]
    CriticalPoints,
    /// a + b = c against the sharpened product bound, exhaustively
    #[value(name = "leqfis-scan")]
    LeqfisScan,
    /// Block compression never decreases a + b = c counts, exhaustively
    #[value(name = "compression-scan")]
    CompressionScan,
    /// T(A, B, A ∪ B) against the main bound, exhaustively
    #[value(name = "main-sweep")]
    MainSweep,
    /// a - b = 2c against the principal and antisymmetric bounds, exhaustively
    #[value(name = "principal-sweep")]
    PrincipalSweep,
    /// T(A, B, C) ≤ G(|A|, |B|, |C|) + 1/4, exhaustively
    #[value(name = "recasting-scan")]
    RecastingScan,
}

impl TargetArg {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    /// Certification tolerance p/q (default 1/1000000000)
    #[arg(long, value_parser = parse_rational)]
    tol: Option<Rational>,
    /// Override the target's threshold
    #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
    threshold: Option<Rational>,
    /// Boxes for certification, outer units for sweeps
    #[arg(long)]
    budget: Option<u64>,
    /// Write the certificate here
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Re-check a stored certificate instead of certifying
    #[arg(long, conflicts_with = "certificate")]
    replay: Option<PathBuf>,
    /// Random samples for the identity checks
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest set size in the triple scans
    #[arg(long)]
    size_cap: Option<usize>,
    /// Largest |A| + |B| (main) or |A| (principal) in the sweeps
    #[arg(long)]
    n_max: Option<usize>,
    /// Ambient interval of the scans and sweeps
    #[arg(long)]
    span: Option<usize>,
    /// First outer unit of a sweep, to resume a partial run
    #[arg(long)]
    start: Option<u64>,
}

pub fn run(args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    if let Some(path) = cfg.pick::<PathBuf>(args.replay.clone(), "replay")? {
        return run_replay(&path, common);
    }
    let target = cfg
        .pick_with(args.target, "target", parse_enum)?
        .ok_or_else(|| Failure::input("verify needs --target or --replay"))?;
    match target {
        TargetArg::LemmaInequality | TargetArg::Claim1 | TargetArg::Claim2U | TargetArg::Claim2V => {
            certify(target, args, common)
        }
        TargetArg::Balancing | TargetArg::XyLemma => {
            let trials = cfg.pick(args.trials, "trials")?.unwrap_or(100_000);
            let seed = cfg.pick(args.seed, "seed")?.unwrap_or(1);
            let reports = if target == TargetArg::Balancing {
                let (a, b) = verify_balancing_identity(trials, seed);
                vec![a, b]
            } else {
                vec![verify_xy_lemma(trials, seed)]
            };
            identities(&reports, common)
        }
        TargetArg::CriticalPoints => {
            let report = critical_point_report();
            let out = match common.format {
                Format::Structured => structured(&report),
                Format::Human => {
                    let mut rows = vec![row(["function", "critical point", "value", "line", "on line"])];
                    for p in &report.points {
                        rows.push(row([
                            &p.function,
                            &format!("({}, {})", p.point[0], p.point[1]),
                            &p.value,
                            &p.line,
                            if p.on_line { "yes" } else { "no" },
                        ]));
                    }
                    table(&rows)
                }
            };
            if report.confirmed() {
                Ok(out)
            } else {
                Err(Failure::new(EXIT_VIOLATION, "critical points differ from (3/10, 1/10) and (7/20, 3/20)").with_report(out))
            }
        }
        TargetArg::CompressionScan => {
            let size_cap = cfg.pick(args.size_cap, "size-cap")?.unwrap_or(3);
            let span = cfg.pick(args.span, "span")?.unwrap_or(6);
            let report = compression_property_scan(size_cap, span, common.jobs)?;
            let out = match common.format {
                Format::Structured => structured(&report),
                Format::Human => sweep_table(
                    "compression-scan",
                    &format!("size cap {size_cap}, span {span}"),
                    report.checked,
                    true,
                    &report.violation,
                    &report.min_slack,
                ),
            };
            match &report.violation {
                Some(_) => Err(Failure::new(EXIT_VIOLATION, "a triple beats its compressed blocks").with_report(out)),
                None => Ok(out),
            }
        }
        TargetArg::LeqfisScan | TargetArg::RecastingScan | TargetArg::MainSweep | TargetArg::PrincipalSweep => {
            sweep(target, args, common)
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    target: &'a str,
    threshold: &'a str,
    tol: &'a str,
    leaf_count: usize,
    max_bound: &'a str,
    witness: &'a Option<ap_extremal::verifier::WitnessPoint>,
    stats: &'a ap_extremal::verifier::CertificateStats,
    certificate: String,
}

fn certify(target: TargetArg, args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    let t = target_by_name(&target.name())?;
    let tol = cfg
        .pick_with(args.tol, "tol", parse_rational)?
        .unwrap_or_else(|| ratio(1, 1_000_000_000));
    let threshold = cfg
        .pick_with(args.threshold, "threshold", parse_rational)?
        .unwrap_or_else(|| t.threshold.clone());
    let mut opts = CertifyOptions::new(tol);
    opts.budget = common.budget(args.budget)?.unwrap_or(DEFAULT_CERTIFY_BUDGET);
    opts.jobs = common.jobs;

    let cert = match certify_sup(&t, &threshold, &opts) {
        Ok(c) => c,
        Err(Error::CertificationFailed(report)) => {
            let msg = format!(
                "could not certify `{}` within {} boxes; {} boxes survive",
                report.target, report.boxes_processed, report.surviving_count
            );
            return Err(Failure::new(EXIT_CERTIFICATION, msg).with_report(failure_report(&report, common.format)));
        }
        Err(e) => return Err(e.into()),
    };

    let written = match cfg.pick::<PathBuf>(args.certificate, "certificate")? {
        Some(path) => {
            std::fs::write(&path, cert.to_json()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Some(path)
        }
        None => None,
    };
    let location = written
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "not written".into());
    Ok(match common.format {
        Format::Structured if written.is_none() => cert.to_json(),
        Format::Structured => structured(&Summary {
            target: &cert.target,
            threshold: &cert.threshold,
            tol: &cert.tol,
            leaf_count: cert.leaf_count,
            max_bound: &cert.max_bound,
            witness: &cert.witness,
            stats: &cert.stats,
            certificate: location,
        }),
        Format::Human => {
            let s = &cert.stats;
            let mut rows = vec![
                row(["target", &cert.target]),
                row(["result", "sup <= threshold + tol"]),
                row(["threshold", &cert.threshold]),
                row(["tol", &cert.tol]),
                row(["max bound", &cert.max_bound]),
                row([
                    "leaves",
                    &format!(
                        "{} (interval {}, piecewise {}, outside {})",
                        cert.leaf_count, s.interval_leaves, s.piecewise_leaves, s.outside_leaves
                    ),
                ]),
                row(["boxes", &s.boxes_processed.to_string()]),
                row(["max depth", &s.max_depth.to_string()]),
                row(["near-maximal", &s.near_maximal.to_string()]),
            ];
            if let Some(w) = &cert.witness {
                rows.push(row(["witness", &format!("({}) = {}", w.point.join(", "), w.value)]));
            }
            rows.push(row(["certificate", &location]));
            table(&rows)
        }
    })
}

fn failure_report(report: &FailureReport, format: Format) -> String {
    match format {
        Format::Structured => structured(report),
        Format::Human => {
            let mut rows = vec![
                row(["target", &report.target]),
                row(["threshold", &report.threshold]),
                row(["tol", &report.tol]),
                row(["boxes", &report.boxes_processed.to_string()]),
                row(["surviving", &report.surviving_count.to_string()]),
                row(["path", "bound", "box"]),
            ];
            for b in report.surviving.iter().take(10) {
                let region: Vec<String> = b
                    .region
                    .iter()
                    .map(|[a, b, c, d]| format!("[{}, {}]", frac(a, b), frac(c, d)))
                    .collect();
                rows.push(row([&b.path, &b.bound, &region.join(" x ")]));
            }
            table(&rows)
        }
    }
}

fn frac(num: &str, den: &str) -> String {
    if den == "1" {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

fn run_replay(path: &PathBuf, common: &Common) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let cert = Certificate::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report = replay(&cert)?;
    Ok(match common.format {
        Format::Structured => structured(&report),
        Format::Human => table(&[
            row(["target", &report.target]),
            row(["result", "replay ok"]),
            row(["leaves", &report.leaves.to_string()]),
            row(["max bound", &report.max_bound]),
        ]),
    })
}

fn identities(reports: &[IdentityReport], common: &Common) -> Result<String, Failure> {
    let out = match common.format {
        Format::Structured => structured(&reports),
        Format::Human => {
            let mut rows = vec![row(["check", "samples", "failures"])];
            for r in reports {
                rows.push(row([&r.name, &r.checked.to_string(), &r.failure_count.to_string()]));
            }
            for r in reports {
                for f in &r.failures {
                    rows.push(row([&r.name, "failed at", &format!("({})", f.join(", "))]));
                }
            }
            table(&rows)
        }
    };
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(Failure::new(EXIT_VIOLATION, format!("{} failed on {} samples", r.name, r.failure_count)).with_report(out)),
        None => Ok(out),
    }
}

fn config_text(c: &Configuration) -> String {
    let sets: Vec<String> = c
        .sets
        .iter()
        .map(|s| crate::output::braces(s))
        .collect();
    format!("{} count {} {} slack {}", sets.join(" "), c.count, c.bound, c.slack)
}

fn sweep_table(
    name: &str,
    family: &str,
    checked: u64,
    complete: bool,
    violation: &Option<Configuration>,
    min_slack: &Option<Configuration>,
) -> String {
    let mut rows = vec![
        row(["check", name]),
        row(["family", family]),
        row(["checked", &checked.to_string()]),
        row(["complete", if complete { "yes" } else { "no" }]),
        row(["violations", if violation.is_some() { "1 (stopped)" } else { "0" }]),
    ];
    if let Some(v) = violation {
        rows.push(row(["violation", &config_text(v)]));
    }
    if let Some(m) = min_slack {
        rows.push(row(["least slack", &config_text(m)]));
    }
    table(&rows)
}

fn sweep(target: TargetArg, args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    let span_flag = cfg.pick(args.span, "span")?;
    let family = match target {
        TargetArg::MainSweep => BoundFamily::Main {
            n_max: cfg.pick(args.n_max, "n-max")?.unwrap_or(7),
            span: span_flag.unwrap_or(10),
        },
        TargetArg::PrincipalSweep => BoundFamily::Principal {
            n_max: cfg.pick(args.n_max, "n-max")?.unwrap_or(5),
            span: span_flag.unwrap_or(6),
        },
        TargetArg::LeqfisScan => BoundFamily::Leqfis {
            size_cap: cfg.pick(args.size_cap, "size-cap")?.unwrap_or(5),
            span: span_flag.unwrap_or(8),
        },
        _ => BoundFamily::Recasting {
            size_cap: cfg.pick(args.size_cap, "size-cap")?.unwrap_or(5),
            span: span_flag.unwrap_or(8),
        },
    };
    let sweep_cfg = SweepConfig {
        jobs: common.jobs,
        budget: common.budget(args.budget)?,
        start: cfg.pick(args.start, "start")?.unwrap_or(0),
    };
    let report = verify_bounds_exhaustive(family, &sweep_cfg)?;
    let describe = match family {
        BoundFamily::Main { n_max, span } => format!("|A| + |B| <= {n_max}, span {span}"),
        BoundFamily::Principal { n_max, span } => format!("|A| <= {n_max}, [-{span}, {span}]"),
        BoundFamily::Leqfis { size_cap, span } | BoundFamily::Recasting { size_cap, span } => {
            format!("sizes <= {size_cap}, span {span}")
        }
    };
    let out = match common.format {
        Format::Structured => structured(&report),
        Format::Human => {
            let mut t = sweep_table(
                &target.name(),
                &describe,
                report.checked,
                report.complete,
                &report.violation,
                &report.min_slack,
            );
            if !report.complete {
                t.push_str(&table(&[row(["resume at", &format!("--start {}", report.cursor)])]));
            }
            t
        }
    };
    if report.violation.is_some() {
        return Err(Failure::new(EXIT_VIOLATION, format!("{} found a bound violation", target.name())).with_report(out));
    }
    if !report.complete {
        return Err(Failure::new(
            EXIT_BUDGET,
            format!(
                "budget exhausted at unit {} of {}; rerun with --start {}",
                report.cursor, report.total_units, report.cursor
            ),
        )
        .with_report(out));
    }
    Ok(out)
}
