//! `regquot`: build and check resolutions of `R/I^s`, compute
//! `Tor^R(R/I, R/I^s)`, inspect the spectral sequence and the splicing.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 bad
//! configuration or input.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};
use regquot::CoefficientDomain;

use commands::{CommandKind, Report};
use config::{ConfigError, ConfigFile, Overrides, RunConfig, SequenceSpec};

#[derive(Parser, Debug)]
#[command(name = "regquot", version, about = "Resolutions of powers of regular ideals and Tor over R/I")]
struct Cli {
    #[arg(value_enum)]
    command: CommandKind,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Number of variables (and generators, for `vars`).
    #[arg(long = "n")]
    n_vars: Option<usize>,
    /// Power of the ideal.
    #[arg(long)]
    s: Option<usize>,
    /// Coefficient domain: Q, Z or Fp:<p>.
    #[arg(long)]
    field: Option<CoefficientDomain>,
    /// vars | powers:a1,a2,.. | explicit:p1;p2;.. | <file with one polynomial per line>
    #[arg(long)]
    sequence: Option<SequenceSpec>,
    /// Highest homological degree shown in grids and rank lists.
    #[arg(long = "max-degree")]
    max_degree: Option<usize>,
    /// Highest internal degree for slicewise checks.
    #[arg(long = "max-internal")]
    max_internal: Option<u32>,
    /// Size of the worker pool.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with any of the run parameters; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Damage the resolution before checking it (build and verify only).
    #[arg(long)]
    corrupt: bool,
}

enum Failure {
    Config(ConfigError),
    Output(std::io::Error),
}

fn resolve(args: CommonArgs) -> Result<RunConfig, ConfigError> {
    let file = args.config.as_deref().map(ConfigFile::load).transpose()?;
    RunConfig::resolve(
        file,
        Overrides {
            n_vars: args.n_vars,
            field: args.field,
            sequence: args.sequence,
            s: args.s,
            max_homological_degree: args.max_degree,
            max_internal_degree: args.max_internal,
            workers: args.workers,
            out: args.out,
            corrupt: args.corrupt,
        },
    )
}

fn execute(cli: Cli) -> Result<Report, Failure> {
    let cfg = resolve(cli.common).map_err(Failure::Config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Failure::Config(ConfigError::Invalid(format!("worker pool: {e}"))))?;
    let report = pool.install(|| commands::run(cli.command, &cfg)).map_err(Failure::Config)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Output)?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Failure::Output)?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(report) => {
            let failed: Vec<&str> = report.checks.iter().filter(|(_, &v)| !v).map(|(k, _)| k.as_str()).collect();
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if failed.is_empty() {
                eprintln!("ok: {} checks passed", report.checks.len());
                ExitCode::SUCCESS
            } else {
                eprintln!("FAILED: {}", failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Output(e)) => {
            eprintln!("error: cannot write report: {e}");
            ExitCode::from(2)
        }
    }
}
