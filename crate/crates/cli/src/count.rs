use std::path::PathBuf;

use clap::ValueEnum;

use ap_extremal::rational::fmt_rational;
use ap_extremal::{count_triples, EquationKind, EquationSpec, Rational};

use crate::config::parse_enum;
use crate::output::{parse_rational, read_set, row, structured, table};
use crate::{Common, Failure, Format, EXIT_VIOLATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Eq {
    /// a + b = 2c
    Ap,
    /// a - b = 2c
    Diff,
    /// a + b = c
    Sum,
    /// a + b = λc
    Lambda,
    /// a - b = λc
    LambdaDiff,
}

impl Eq {
    pub fn spec(self, lambda: Option<Rational>) -> Result<EquationSpec, Failure> {
        let kind = match self {
            Eq::Ap => EquationKind::ApSum,
            Eq::Diff => EquationKind::ApDiff,
            Eq::Sum => EquationKind::PlainSum,
            Eq::Lambda => EquationKind::LambdaSum,
            Eq::LambdaDiff => EquationKind::LambdaDiff,
        };
        Ok(EquationSpec::new(kind, lambda)?)
    }
}

#[derive(clap::Args)]
pub struct Args {
    /// Set file for A (`-` reads standard input)
    #[arg(long)]
    a: Option<PathBuf>,
    /// Set file for B (default: A)
    #[arg(long)]
    b: Option<PathBuf>,
    /// Set file for C, or `union` for A ∪ B (default: A ∪ B for sums, A for differences)
    #[arg(long)]
    c: Option<PathBuf>,
    /// Equation (default: ap)
    #[arg(long, value_enum)]
    eq: Option<Eq>,
    /// λ as p/q for the lambda equations
    #[arg(long, value_parser = parse_rational)]
    lambda: Option<Rational>,
}

pub fn run(args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    let a_path: PathBuf = cfg
        .pick(args.a, "a")?
        .ok_or_else(|| Failure::input("count needs --a FILE"))?;
    let eq = cfg.pick_with(args.eq, "eq", parse_enum)?.unwrap_or(Eq::Ap);
    let lambda = cfg.pick_with(args.lambda, "lambda", parse_rational)?;
    let spec = eq.spec(lambda)?;

    let a = read_set(&a_path)?;
    let b = match cfg.pick::<PathBuf>(args.b, "b")? {
        Some(p) => read_set(&p)?,
        None => a.clone(),
    };
    let c = match cfg.pick::<PathBuf>(args.c, "c")? {
        Some(p) if p.as_os_str() == "union" => a.union(&b),
        Some(p) => read_set(&p)?,
        None if spec.sign() < 0 => a.clone(),
        None => a.union(&b),
    };

    let report = count_triples(&a, &b, &c, &spec);
    let out = match common.format {
        Format::Structured => structured(&report.to_json()),
        Format::Human => {
            let (na, nb, nc) = report.sizes;
            let mut rows = vec![
                row(["equation", &spec.to_string()]),
                row(["sizes", &format!("{na} {nb} {nc}")]),
                row(["count", &report.count.to_string()]),
            ];
            if !report.bounds.is_empty() {
                rows.push(row(["bound", "value", "slack"]));
                for b in &report.bounds {
                    rows.push(row([&b.name, &fmt_rational(&b.value), &fmt_rational(&b.slack)]));
                }
            }
            table(&rows)
        }
    };
    if let Some(v) = report.violations().next() {
        return Err(Failure::new(
            EXIT_VIOLATION,
            format!("count {} exceeds the {} bound {}", report.count, v.name, fmt_rational(&v.value)),
        )
        .with_report(out));
    }
    Ok(out)
}
