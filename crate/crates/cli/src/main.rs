//! Batch front-end: parse a workspace document, run named verification
//! suites, emit deterministic reports.
//!
//! Exit codes: 0 all checks passed, 1 verdict failure, 2 input error,
//! 3 resource guard.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use h1lab::error::Error as CoreError;

use h1lab_cli::report::Report;
use h1lab_cli::suites::{self, run_suite, SuiteOptions, SUITES};
use h1lab_cli::workspace::Workspace;

#[derive(Parser)]
#[command(name = "h1lab", version, about = "Exact nonabelian H1 and homotopy fixed point checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// workspace document to load
    #[arg(long)]
    input: Option<PathBuf>,
    /// carrier bound for constructed groups and groupoids
    #[arg(long)]
    max_carrier: Option<usize>,
    /// search-space bound for enumeration kernels
    #[arg(long)]
    max_candidates: Option<u64>,
    /// seed for the fuzz corpora
    #[arg(long)]
    seed: Option<u64>,
    /// write the report document here instead of stdout
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Z1 and the H1 classes of one action
    H1 {
        /// action id in the workspace
        action: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run one verification suite over the workspace
    Verify {
        /// one of: shapiro, exactness, p-group, tower, beta, classifying,
        /// quotient, shimura, presentations
        suite: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every suite and emit the consolidated report
    Report {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn load_workspace(common: &CommonArgs) -> Result<Workspace> {
    match &common.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Workspace::parse(&text)
        }
        None => Ok(Workspace::default()),
    }
}

fn options(common: &CommonArgs) -> SuiteOptions {
    let mut opt = SuiteOptions::default();
    if let Some(c) = common.max_carrier {
        opt.limits.max_carrier = c;
    }
    if let Some(c) = common.max_candidates {
        opt.limits.max_candidates = c;
    }
    if let Some(s) = common.seed {
        opt.seed = s;
    }
    opt
}

fn write_out(common: &CommonArgs, text: &str) -> Result<()> {
    match &common.emit {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: &Report, common: &CommonArgs) -> Result<ExitCode> {
    for (suite, wall) in &report.wall {
        eprintln!("suite {suite}: {} checks, {:.2?}", report
            .records
            .iter()
            .filter(|r| &r.suite == suite)
            .count(), wall);
    }
    write_out(common, &report.serialize())?;
    if report.failed() > 0 {
        eprintln!("{} check(s) failed", report.failed());
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::H1 { action, common } => {
            let ws = load_workspace(common)?;
            let opt = options(common);
            let lines = suites::h1_lines(&ws, action, &opt.limits)?;
            write_out(common, &(lines.join("\n") + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, common } => {
            let ws = load_workspace(common)?;
            let opt = options(common);
            let report = run_suite(suite, &ws, &opt)?;
            finish(&report, common)
        }
        Command::Report { common } => {
            let ws = load_workspace(common)?;
            let opt = options(common);
            let started = Instant::now();
            let mut merged = Report::default();
            for suite in SUITES {
                merged.merge(run_suite(suite, &ws, &opt)?);
            }
            eprintln!("total: {:.2?}", started.elapsed());
            finish(&merged, common)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let guard = err
                .downcast_ref::<CoreError>()
                .map(|e| matches!(e, CoreError::SizeGuard { .. }))
                .unwrap_or(false);
            if guard {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
