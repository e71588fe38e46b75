//! `maninlab`: command-line driver for point counts, the Peyre constant and
//! the equidistribution and asymptotic experiments on the 2A2+A1 cubic surface.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 bad configuration,
//! 3 computational budget exceeded.

mod commands;
mod config;
mod output;
mod verify;

use anyhow::Result;
use clap::{Parser, Subcommand};
use config::{read_settings, require, CommandName, Format, Settings, Task};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "maninlab", version, about = "Rational points of bounded height on the split 2A2+A1 cubic surface")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// JSON config file; flags given on the command line override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    settings: Settings,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of height ≤ B off the lines (JSON), or list them with --audit (CSV)
    Count,
    /// Map one point to its torsor tuple (--point) or back (--tuple)
    TorsorMap,
    /// Peyre's constant with its ingredients
    Peyre,
    /// Divisor-count discrepancies in residue classes over a grid of (X, q)
    Equidist,
    /// Main-term experiments
    Asymptotics {
        #[command(subcommand)]
        task: Option<TaskCmd>,
    },
    /// Run the exact-identity suite; nonzero exit on any failure
    Verify,
    /// Write one experiment table as CSV (--kind)
    PlotData,
}

#[derive(Subcommand, Clone, Copy)]
enum TaskCmd {
    /// Local factors over a prime range, against their closed form
    LocalFactors,
    /// The weighted sum over the reduced torsor variables on a B grid
    Sum1,
    /// N(B) / (B log(B)^6) on a B grid, next to the constant
    ManinRatio,
    /// Assemble the leading constant from its factors and compare
    AssemblyCheck,
}

/// Failures that carry their own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Invariant(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "bad configuration: {m}"),
            Failure::Invariant(m) => write!(f, "invariant failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

fn exit_code(e: &anyhow::Error) -> u8 {
    use maninlab::Error as E;
    for cause in e.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Config(_) => 2,
                Failure::Invariant(_) => 1,
            };
        }
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::BudgetExceeded(_) => 3,
                E::InvalidArgument(_) | E::NotOnSurface(_) | E::OnLine(_) | E::TorsorInvariant { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn run(cli: Cli) -> Result<()> {
    let mut flags = cli.settings;
    if let Some(c) = &cli.command {
        let (name, task) = match c {
            Command::Count => (CommandName::Count, None),
            Command::TorsorMap => (CommandName::TorsorMap, None),
            Command::Peyre => (CommandName::Peyre, None),
            Command::Equidist => (CommandName::Equidist, None),
            Command::Asymptotics { task } => (
                CommandName::Asymptotics,
                task.map(|t| match t {
                    TaskCmd::LocalFactors => Task::LocalFactors,
                    TaskCmd::Sum1 => Task::Sum1,
                    TaskCmd::ManinRatio => Task::ManinRatio,
                    TaskCmd::AssemblyCheck => Task::AssemblyCheck,
                }),
            ),
            Command::Verify => (CommandName::Verify, None),
            Command::PlotData => (CommandName::PlotData, None),
        };
        flags.command = Some(name);
        flags.task = task;
    }
    let s = read_settings(flags, cli.config.as_deref())?;
    if let Some(n) = s.thread_count()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    }
    let command = require(s.command, "command (give a subcommand or \"command\" in the config file)")?;
    let out = match command {
        CommandName::Count => commands::count(&s)?,
        CommandName::TorsorMap => commands::torsor_map(&s)?,
        CommandName::Peyre => commands::peyre(&s)?,
        CommandName::Equidist => commands::equidist(&s)?,
        CommandName::Asymptotics => commands::asymptotics(require(s.task, "asymptotics task")?, &s)?,
        CommandName::PlotData => commands::plot_data(&s)?,
        CommandName::Verify => {
            let checks = verify::run_suite(s.seed.unwrap_or(0));
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            let text = match s.format {
                Some(Format::Json) => output::json_text(&serde_json::to_value(&checks)?),
                Some(Format::Csv) => return Err(Failure::Config("verify output is text or JSON".into()).into()),
                None => verify::render_text(&checks),
            };
            let failure = (!failed.is_empty()).then(|| failed.join(", "));
            commands::Outcome { text, failure }
        }
    };
    output::emit(&out.text, s.output.as_deref())?;
    match out.failure {
        Some(m) => Err(Failure::Invariant(m).into()),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::Context;

    #[test]
    fn exit_codes() {
        let wrapped = |e: anyhow::Error| Err::<(), _>(e).context("while running").unwrap_err();
        assert_eq!(exit_code(&wrapped(Failure::Invariant("x".into()).into())), 1);
        assert_eq!(exit_code(&wrapped(Failure::Config("x".into()).into())), 2);
        assert_eq!(exit_code(&wrapped(maninlab::Error::BudgetExceeded("x".into()).into())), 3);
        assert_eq!(exit_code(&wrapped(maninlab::Error::InvalidArgument("x".into()).into())), 2);
        assert_eq!(exit_code(&wrapped(maninlab::Error::Overflow("x").into())), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
    }
}
