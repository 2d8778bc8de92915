use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use ap_extremal::rational::fmt_rational;
use ap_extremal::search::{
    checkpoint_resume, checkpoint_save, enumerate_max, Objective, RunOptions, SearchSpec, Witness,
    DEFAULT_WITNESS_CAP,
};
use ap_extremal::{Error, Rational};

use crate::config::parse_enum;
use crate::count::Eq;
use crate::output::{braces, parse_rational, row, structured, table};
use crate::{Common, Failure, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// T(A, B, A ∪ B) over pairs with |A| + |B| = n in [0, span)
    MaxTUnion,
    /// Solutions in A over |A| = n in [-span, span]
    MaxDiff,
    /// As max-diff, antisymmetric sets only
    MaxDiffAntisym,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MaxTUnion => Objective::MaxTUnion,
            ObjectiveArg::MaxDiff => Objective::MaxDiff,
            ObjectiveArg::MaxDiffAntisym => Objective::MaxDiffAntisym,
        }
    }
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Equation (default: ap for max-t-union, diff otherwise)
    #[arg(long, value_enum)]
    eq: Option<Eq>,
    #[arg(long, value_parser = parse_rational)]
    lambda: Option<Rational>,
    /// Total size of the configuration
    #[arg(long)]
    n: Option<usize>,
    /// Ambient span (default: 2n for pairs, 4n otherwise)
    #[arg(long)]
    span: Option<usize>,
    /// Save progress here after every chunk of work units
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the --checkpoint file
    #[arg(long)]
    resume: bool,
    /// Maximum number of witnesses reported
    #[arg(long)]
    witness_cap: Option<usize>,
    /// Stop after examining this many configurations
    #[arg(long)]
    budget: Option<u64>,
    /// Disable bound-based pruning
    #[arg(long)]
    no_prune: bool,
}

#[derive(Serialize)]
struct Doc<'a> {
    objective: &'static str,
    equation: String,
    lambda: Option<String>,
    n: usize,
    span: usize,
    best: u64,
    witnesses: &'a [Witness],
    truncated: bool,
}

pub fn run(args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    let objective: Objective = cfg
        .pick_with(args.objective, "objective", parse_enum)?
        .ok_or_else(|| Failure::input("search needs --objective"))?
        .into();
    let n: usize = cfg
        .pick(args.n, "n")?
        .ok_or_else(|| Failure::input("search needs --n"))?;
    let lambda = cfg.pick_with(args.lambda, "lambda", parse_rational)?;
    let equation = match cfg.pick_with(args.eq, "eq", parse_enum)? {
        Some(eq) => eq.spec(lambda)?,
        None if lambda.is_some() => return Err(Failure::input("--lambda needs --eq lambda or lambda-diff")),
        None => objective.default_equation(),
    };
    let span = cfg.pick(args.span, "span")?.unwrap_or_else(|| objective.default_span(n));
    let mut spec = SearchSpec::new(objective, equation, n, span);
    spec.witness_cap = cfg.pick(args.witness_cap, "witness-cap")?.unwrap_or(DEFAULT_WITNESS_CAP);
    spec.prune = !cfg.switch(args.no_prune, "no-prune")?;

    let checkpoint: Option<PathBuf> = cfg.pick(args.checkpoint, "checkpoint")?;
    let resume = if cfg.switch(args.resume, "resume")? {
        let path = checkpoint
            .as_ref()
            .ok_or_else(|| Failure::input("--resume needs --checkpoint FILE"))?;
        Some(checkpoint_resume(path)?)
    } else {
        None
    };
    let opts = RunOptions {
        jobs: common.jobs,
        budget: common.budget(args.budget)?,
        resume,
        checkpoint: checkpoint.as_deref(),
    };

    let outcome = match enumerate_max(&spec, opts) {
        Ok(o) => o,
        Err(Error::BudgetExceeded(state)) => {
            let hint = match &checkpoint {
                Some(path) => {
                    checkpoint_save(&state, path)?;
                    format!("; resume with --resume --checkpoint {}", path.display())
                }
                None => "; pass --checkpoint FILE to keep progress".to_string(),
            };
            let msg = Failure::from(Error::BudgetExceeded(state.clone())).message;
            return Err(Failure::new(crate::EXIT_BUDGET, msg + &hint));
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!("stats: examined {} configurations", outcome.examined);

    let doc = Doc {
        objective: objective.name(),
        equation: spec.equation.to_string(),
        lambda: spec.equation.lambda().map(fmt_rational),
        n,
        span,
        best: outcome.best,
        witnesses: &outcome.witnesses,
        truncated: outcome.truncated,
    };
    Ok(match common.format {
        Format::Structured => structured(&doc),
        Format::Human => {
            let mut rows = vec![
                row(["objective", doc.objective]),
                row(["equation", &doc.equation]),
                row(["n", &n.to_string()]),
                row(["span", &span.to_string()]),
                row(["best", &outcome.best.to_string()]),
                row([
                    "witnesses",
                    &format!(
                        "{}{}",
                        outcome.witnesses.len(),
                        if outcome.truncated { " (truncated)" } else { "" }
                    ),
                ]),
            ];
            for w in &outcome.witnesses {
                let text = match &w.b {
                    Some(b) => format!("A = {}  B = {}", braces(&w.a), braces(b)),
                    None => braces(&w.a),
                };
                rows.push(row(["", &text]));
            }
            table(&rows)
        }
    })
}
