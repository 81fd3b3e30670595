//! `wgdisp`: dispersion energies of two dipoles in a rectangular waveguide.
//!
//! Exit codes: 0 success, 1 check failure, 2 argument error, 3 input-file
//! error, 4 resource cap.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug)]
pub enum Failure {
    Checks,
    Usage(String),
    InputFile(String),
    ResourceCap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Checks => 1,
            Failure::Usage(_) => 2,
            Failure::InputFile(_) => 3,
            Failure::ResourceCap(_) => 4,
        }
    }
}

impl From<wgdisp::Error> for Failure {
    fn from(e: wgdisp::Error) -> Self {
        use wgdisp::Error::*;
        match e {
            SpeciesParse { .. } => Failure::InputFile(e.to_string()),
            ModeCapExceeded { .. } | SeriesNotConverged { .. } | Quadrature { .. } => {
                Failure::ResourceCap(e.to_string())
            }
            InvalidGeometry(_) | InvalidMode(_) | PointOutside { .. } | InvalidInput(_) | NotTightlyConfined { .. } => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionSet {
    PaperLiteral,
    OracleConsistent,
}

#[derive(Debug, Parser)]
#[command(
    name = "wgdisp",
    version,
    about = "Dipole-dipole dispersion energy inside a rectangular waveguide"
)]
pub struct Cli {
    /// Flat `key = value` file mirroring the flags; flags given on the
    /// command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_enum, default_value_t = ConventionSet::OracleConsistent)]
    pub convention: ConventionSet,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List modes below a cutoff.
    Modes(commands::ModesArgs),
    /// Per-mode coupling functions, closed form and quadrature.
    Coupling(commands::CouplingArgs),
    /// Dispersion energy at one separation.
    Energy(commands::EnergyArgs),
    /// Energy over a range of separations.
    Sweep(commands::SweepArgs),
    /// Data behind the published figures.
    Reproduce(commands::ReproduceArgs),
    /// Closed forms, oracle and free-space recovery self-checks.
    OracleCheck(commands::OracleCheckArgs),
}

/// Flags shared by every subcommand, after config merging.
#[derive(Debug, Clone)]
pub struct Common {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub convention: ConventionSet,
    pub seed: u64,
}

fn command() -> clap::Command {
    let cmd = Cli::command().args_override_self(true);
    let subs: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    subs.into_iter()
        .fold(cmd, |c, name| c.mut_subcommand(name, |s| s.args_override_self(true)))
}

fn parse(args: Vec<OsString>) -> Result<Cli, Failure> {
    let cmd = command();
    let args = config::inject(&cmd, args)?;
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => return Err(Failure::Usage(e.render().to_string())),
    };
    Cli::from_arg_matches(&matches).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::InputFile(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::InputFile(format!("cannot write to stdout: {e}")))
        }
    }
}

fn run(args: Vec<OsString>) -> Result<(), Failure> {
    let cli = parse(args)?;
    let common = Common {
        out: cli.out,
        format: cli.format,
        convention: cli.convention,
        seed: cli.seed,
    };
    let (text, outcome) = match cli.command {
        Command::Modes(a) => (commands::modes(&common, &a)?, Ok(())),
        Command::Coupling(a) => (commands::coupling(&common, &a)?, Ok(())),
        Command::Energy(a) => (commands::energy(&common, &a)?, Ok(())),
        Command::Sweep(a) => (commands::sweep(&common, &a)?, Ok(())),
        Command::Reproduce(a) => (commands::reproduce(&common, &a)?, Ok(())),
        Command::OracleCheck(a) => commands::oracle_check(&common, &a)?,
    };
    emit(&common, &text)?;
    outcome
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Checks => eprintln!("wgdisp: one or more checks failed"),
                Failure::Usage(m) => eprint!("{}", ensure_newline(m)),
                Failure::InputFile(m) | Failure::ResourceCap(m) => eprintln!("wgdisp: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn ensure_newline(m: &str) -> String {
    let m = if m.starts_with("error:") {
        m.to_string()
    } else {
        format!("error: {m}")
    };
    if m.ends_with('\n') {
        m
    } else {
        m + "\n"
    }
}
