//! `dynmo`: run the experiment grid, recompute metrics from stored traces,
//! or rebuild the summary table.
//!
//! Exit codes: 0 success, 1 configuration error, 2 failed cells or other
//! runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dynmo_core::harness::{self, ExperimentConfig, HarnessError, SummaryTable};
use log::error;

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;

#[derive(Parser)]
#[command(name = "dynmo", version, about = "Dynamic multi-objective optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the experiment grid and write all artifacts.
    Run(RunArgs),
    /// Recompute per-run reports from stored trace files.
    Metrics(OutArg),
    /// Rebuild summary.csv from the per-run report files.
    Summarize(OutArg),
}

#[derive(Args)]
struct OutArg {
    /// Output directory holding the artifacts.
    #[arg(long, env = "DYNMO_OUT", default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file applied on top of the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated benchmark ids (fda1, dimp2, dmop3).
    #[arg(long)]
    problem: Option<String>,
    /// Comma-separated optimizer ids (dynamic-mopso, omopso, nsga2).
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    runs: Option<u32>,
    /// Base seed; every cell derives its own seed from it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "DYNMO_OUT")]
    out: Option<PathBuf>,
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    severity: Option<u32>,
    #[arg(long)]
    frequency: Option<u32>,
    /// Concurrent cells (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, HarnessError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("problems", self.problem),
            ("algorithms", self.algorithm),
            ("runs", self.runs.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("iterations", self.iterations.map(|v| v.to_string())),
            ("severity", self.severity.map(|v| v.to_string())),
            ("frequency", self.frequency.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                config.set(key, &value)?;
            }
        }
        if let Some(out) = self.out {
            config.output_dir = out;
        }
        config.validate()?;
        Ok(config)
    }
}

fn print_summary(table: &SummaryTable) {
    println!(
        "{:<8} {:<14} {:<7} {:>12} {:>12} {:>12}",
        "problem", "algorithm", "metric", "mean", "median", "sd"
    );
    for row in &table.rows {
        println!(
            "{:<8} {:<14} {:<7} {:>12.4e} {:>12.4e} {:>12.4e}{}",
            row.problem,
            row.algorithm,
            row.metric,
            row.stats.mean,
            row.stats.median,
            row.stats.sd,
            if row.best { "  *" } else { "" }
        );
    }
}

fn exit_for(err: &HarnessError) -> ExitCode {
    error!("{err}");
    eprintln!("error: {err}");
    if err.is_config() {
        ExitCode::from(EXIT_CONFIG)
    } else {
        ExitCode::from(EXIT_PARTIAL)
    }
}

fn run(args: RunArgs) -> ExitCode {
    let config = match args.into_config() {
        Ok(config) => config,
        Err(err) => return exit_for(&err),
    };
    match harness::run_experiment(&config) {
        Ok(outcome) => {
            print_summary(&outcome.summary);
            println!(
                "{} runs written to {}",
                outcome.completed,
                config.output_dir.display()
            );
            if outcome.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for failure in &outcome.failures {
                    eprintln!(
                        "failed: {}/{} run {}: {}",
                        failure.cell.problem, failure.cell.algorithm, failure.cell.run, failure.error
                    );
                }
                ExitCode::from(EXIT_PARTIAL)
            }
        }
        Err(err) => exit_for(&err),
    }
}

fn metrics(out: &OutArg) -> anyhow::Result<()> {
    let n = harness::recompute_metrics(&out.out)
        .with_context(|| format!("recomputing metrics under {}", out.out.display()))?;
    println!("recomputed {n} reports");
    let table = harness::rebuild_summary(&out.out)?;
    print_summary(&table);
    Ok(())
}

fn summarize(out: &OutArg) -> anyhow::Result<()> {
    let table = harness::rebuild_summary(&out.out)
        .with_context(|| format!("summarizing {}", out.out.display()))?;
    print_summary(&table);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => return run(args),
        Command::Metrics(out) => metrics(&out),
        Command::Summarize(out) => summarize(&out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_PARTIAL)
        }
    }
}
