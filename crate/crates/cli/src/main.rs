//! `ap-extremal`: count, search, verify and construct from the command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal error |
//! | 2 | unreadable or malformed input (files, flags, config, checkpoints) |
//! | 3 | a proven bound or identity was violated (an implementation bug) |
//! | 4 | budget exhausted; the run can be resumed |
//! | 5 | certification failed; surviving boxes are reported |

mod config;
mod count;
mod construct;
mod output;
mod search;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ap_extremal::Error;
use config::{parse_enum, Config};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_CERTIFICATION: u8 = 5;

/// Budget override for searches and certifications.
pub const BUDGET_ENV: &str = "AP_EXTREMAL_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Parser)]
#[command(name = "ap-extremal", version, about = "Counting, search and certified bounds for three-term progression equations")]
struct Cli {
    /// Output format (default: human)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML file with default values for any long flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solutions of an equation over set files
    Count(count::Args),
    /// Exhaustive search for extremal configurations
    Search(search::Args),
    /// Certify inequalities and run the exact checks
    Verify(verify::Args),
    /// Write one of the sharp example sets
    Construct(construct::Args),
}

/// An error with its exit code. `report` is printed on stdout before the
/// message goes to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub report: Option<String>,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            report: None,
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }

    pub fn with_report(mut self, report: String) -> Self {
        self.report = Some(report);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            Error::CertificationFailed(_) | Error::Replay(_) => EXIT_CERTIFICATION,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

/// Options shared by every subcommand after merging flags and config.
pub struct Common {
    pub format: Format,
    pub jobs: Option<usize>,
    pub config: Config,
}

impl Common {
    /// Flag, then config, then `AP_EXTREMAL_BUDGET`.
    pub fn budget(&self, flag: Option<u64>) -> Result<Option<u64>, Failure> {
        if let Some(b) = self.config.pick(flag, "budget")? {
            return Ok(Some(b));
        }
        match std::env::var(BUDGET_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|e| Failure::input(format!("{BUDGET_ENV}: {e}"))),
            Err(_) => Ok(None),
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let common = Common {
        format: config.pick_with(cli.format, "format", parse_enum)?.unwrap_or(Format::Human),
        jobs: config.pick(cli.jobs, "jobs")?,
        config,
    };
    if common.jobs == Some(0) {
        return Err(Failure::input("--jobs must be at least 1"));
    }
    match cli.command {
        Command::Count(args) => count::run(args, &common),
        Command::Search(args) => search::run(args, &common),
        Command::Verify(args) => verify::run(args, &common),
        Command::Construct(args) => construct::run(args, &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = &f.report {
                print!("{report}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
