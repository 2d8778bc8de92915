use std::path::PathBuf;

use clap::ValueEnum;

use ap_extremal::constructions::{staircase, symmetric_interval};
use ap_extremal::numset::format_set;

use crate::config::parse_enum;
use crate::{Common, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// {1..m} ∪ {m+2, m+4, .., 4m} for even m
    Staircase,
    /// {-m..m}
    Interval,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,
    /// Write here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Always writes the set file format, whatever `--format` says.
pub fn run(args: Args, common: &Common) -> Result<String, Failure> {
    let cfg = &common.config;
    let family = cfg
        .pick_with(args.family, "family", parse_enum)?
        .ok_or_else(|| Failure::input("construct needs --family"))?;
    let m: i64 = cfg.pick(args.m, "m")?.ok_or_else(|| Failure::input("construct needs --m"))?;
    let set = match family {
        Family::Staircase => staircase(m)?,
        Family::Interval => symmetric_interval(m)?,
    };
    let text = format_set(&set);
    match cfg.pick::<PathBuf>(args.out, "out")? {
        Some(path) => {
            std::fs::write(&path, &text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
