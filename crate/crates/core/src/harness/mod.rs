//! Experiment runner: every (problem, algorithm, run) cell of the grid is
//! executed with a seed derived from its coordinates, scored per window,
//! and written to disk. The summary is assembled once all cells are done.
//!
//! Output layout under the output directory:
//!
//! ```text
//! summary.csv
//! <problem>/<algorithm>/hv_curve.csv
//! <problem>/<algorithm>/run_000_report.csv
//! <problem>/<algorithm>/run_000_trace.csv
//! <problem>/<algorithm>/run_000_front.txt
//! ```

mod config;
pub mod io;
mod summary;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use thiserror::Error;

use crate::benchmarks::{BenchmarkError, BenchmarkId, BenchmarkSpec};
use crate::metrics::{self, MetricError, MetricReport};
use crate::optimizers::{self, OptimizerConfig, OptimizerError, OptimizerId, RunTrace};
use crate::seed::cell_seed;

pub use config::{ExperimentConfig, DEFAULT_BASE_SEED, DEFAULT_RUNS};
pub use summary::{summarize, Metric, RunSummary, Stats, SummaryRow, SummaryTable};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const HV_CURVE_FILE: &str = "hv_curve.csv";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed artifact: {0}")]
    Format(String),
    #[error("window {window} out of range ({available} snapshots)")]
    InvalidWindow { window: usize, available: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Benchmark(#[from] BenchmarkError),
}

impl HarnessError {
    pub fn is_config(&self) -> bool {
        matches!(self, HarnessError::Config(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub problem: BenchmarkId,
    pub algorithm: OptimizerId,
    pub run: u32,
}

impl Cell {
    pub fn seed(&self, base_seed: u64) -> u64 {
        cell_seed(base_seed, self.algorithm.as_str(), self.problem.as_str(), self.run)
    }

    /// Seed of the environment (dMOP3's switching schedule). Shared by all
    /// algorithms on the same run index so they face the same changes.
    pub fn environment_seed(&self, base_seed: u64) -> u64 {
        cell_seed(base_seed, "environment", self.problem.as_str(), self.run)
    }

    pub fn directory(&self, root: &Path) -> PathBuf {
        root.join(self.problem.as_str()).join(self.algorithm.as_str())
    }

    pub fn report_path(&self, root: &Path) -> PathBuf {
        self.directory(root).join(format!("run_{:03}_report.csv", self.run))
    }

    pub fn trace_path(&self, root: &Path) -> PathBuf {
        self.directory(root).join(format!("run_{:03}_trace.csv", self.run))
    }

    pub fn front_path(&self, root: &Path) -> PathBuf {
        self.directory(root).join(format!("run_{:03}_front.txt", self.run))
    }
}

#[derive(Debug)]
pub struct CellFailure {
    pub cell: Cell,
    pub error: HarnessError,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub summary: SummaryTable,
    pub completed: usize,
    pub failures: Vec<CellFailure>,
}

/// Runs one cell in memory, without touching the disk.
pub fn execute_cell(config: &ExperimentConfig, cell: Cell) -> Result<(RunTrace, MetricReport), HarnessError> {
    let spec = BenchmarkSpec::with_dimension(cell.problem, config.dimension);
    let problem = spec.build(config.optimizer.severity, cell.environment_seed(config.base_seed))?;
    let optimizer = OptimizerConfig {
        seed: cell.seed(config.base_seed),
        ..config.optimizer.clone()
    };
    let trace = match cell.algorithm {
        OptimizerId::Nsga2 => optimizers::run_nsga2(&problem, &optimizer, &config.nsga)?,
        other => optimizers::run(other, &problem, &optimizer)?,
    };
    let report = metrics::report(&trace, &spec)?;
    Ok((trace, report))
}

/// Runs one cell and writes its report, trace and final front.
pub fn run_cell(config: &ExperimentConfig, cell: Cell) -> Result<MetricReport, HarnessError> {
    let (trace, report) = execute_cell(config, cell)?;
    let root = &config.output_dir;
    io::write_report(&cell.report_path(root), &report)?;
    io::write_trace(&cell.trace_path(root), &trace)?;
    if !trace.windows.is_empty() {
        io::emit_front_snapshot(&trace, trace.windows.len() - 1, &cell.front_path(root))?;
    }
    Ok(report)
}

fn run_summary(cell: Cell, report: &MetricReport) -> RunSummary {
    RunSummary {
        problem: cell.problem.to_string(),
        algorithm: cell.algorithm.to_string(),
        run: cell.run,
        gd: report.mean_gd(),
        spread: report.mean_spread(),
        hv: report.mean_hv(),
    }
}

pub fn grid(config: &ExperimentConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &problem in &config.problems {
        for &algorithm in &config.algorithms {
            for run in 0..config.runs {
                cells.push(Cell {
                    problem,
                    algorithm,
                    run,
                });
            }
        }
    }
    cells
}

/// Executes the whole grid. Configuration errors abort before any run;
/// failing cells are recorded and the rest of the grid continues.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    config.validate()?;
    std::fs::create_dir_all(&config.output_dir)?;
    let cells = grid(config);
    info!(
        "running {} cells into {}",
        cells.len(),
        config.output_dir.display()
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let results: Vec<(Cell, Result<MetricReport, HarnessError>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&cell| (cell, run_cell(config, cell)))
            .collect()
    });

    let mut failures = Vec::new();
    let mut by_cell: BTreeMap<(BenchmarkId, OptimizerId), Vec<MetricReport>> = BTreeMap::new();
    let mut runs = Vec::new();
    for (cell, result) in results {
        match result {
            Ok(report) => {
                runs.push(run_summary(cell, &report));
                by_cell
                    .entry((cell.problem, cell.algorithm))
                    .or_default()
                    .push(report);
            }
            Err(error) => {
                warn!("{}/{} run {} failed: {error}", cell.problem, cell.algorithm, cell.run);
                failures.push(CellFailure { cell, error });
            }
        }
    }

    for ((problem, algorithm), reports) in &by_cell {
        let dir = config.output_dir.join(problem.as_str()).join(algorithm.as_str());
        io::write_hv_curve(&dir.join(HV_CURVE_FILE), reports)?;
    }
    let summary = summarize(&runs);
    io::write_summary(&config.output_dir.join(SUMMARY_FILE), &summary)?;

    Ok(ExperimentOutcome {
        summary,
        completed: runs.len(),
        failures,
    })
}

/// Artifacts of one kind under `root`, as (problem, algorithm, run, path),
/// sorted.
fn find_artifacts(root: &Path, suffix: &str) -> Result<Vec<(String, String, u32, PathBuf)>, HarnessError> {
    let mut found = Vec::new();
    let sorted_dirs = |dir: &Path| -> Result<Vec<PathBuf>, HarnessError> {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        entries.sort();
        Ok(entries)
    };
    for problem_dir in sorted_dirs(root)? {
        if !problem_dir.is_dir() {
            continue;
        }
        for algorithm_dir in sorted_dirs(&problem_dir)? {
            if !algorithm_dir.is_dir() {
                continue;
            }
            for file in sorted_dirs(&algorithm_dir)? {
                let name = file.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                let Some(run) = name
                    .strip_prefix("run_")
                    .and_then(|rest| rest.strip_suffix(suffix))
                    .and_then(|n| n.parse::<u32>().ok())
                else {
                    continue;
                };
                let label = |p: &Path| p.file_name().unwrap_or_default().to_string_lossy().into_owned();
                found.push((label(&problem_dir), label(&algorithm_dir), run, file));
            }
        }
    }
    Ok(found)
}

/// Recomputes every report CSV (and the HV curves) from stored traces.
/// Returns the number of reports written.
pub fn recompute_metrics(root: &Path) -> Result<usize, HarnessError> {
    let traces = find_artifacts(root, "_trace.csv")?;
    let mut curves: BTreeMap<PathBuf, Vec<MetricReport>> = BTreeMap::new();
    for (problem, _, run, path) in &traces {
        let id: BenchmarkId = problem.parse()?;
        let fronts = io::read_trace(path)?;
        let report = metrics::report_fronts(&fronts, &BenchmarkSpec::new(id))?;
        let dir = path.parent().unwrap_or(root).to_path_buf();
        io::write_report(&dir.join(format!("run_{run:03}_report.csv")), &report)?;
        curves.entry(dir).or_default().push(report);
    }
    for (dir, reports) in &curves {
        io::write_hv_curve(&dir.join(HV_CURVE_FILE), reports)?;
    }
    Ok(traces.len())
}

/// Rebuilds `summary.csv` from the report CSVs under `root`.
pub fn rebuild_summary(root: &Path) -> Result<SummaryTable, HarnessError> {
    let mut runs = Vec::new();
    for (problem, algorithm, run, path) in find_artifacts(root, "_report.csv")? {
        let report = io::read_report(&path)?;
        runs.push(RunSummary {
            problem,
            algorithm,
            run,
            gd: report.mean_gd(),
            spread: report.mean_spread(),
            hv: report.mean_hv(),
        });
    }
    let table = summarize(&runs);
    io::write_summary(&root.join(SUMMARY_FILE), &table)?;
    Ok(table)
}
