use std::path::{Path, PathBuf};

use crate::benchmarks::{BenchmarkId, DEFAULT_DIMENSION};
use crate::optimizers::{Nsga2Config, OptimizerConfig, OptimizerId};

use super::HarnessError;

pub const DEFAULT_RUNS: u32 = 30;
pub const DEFAULT_BASE_SEED: u64 = 2017;

/// The full experiment grid plus every optimizer setting.
///
/// Defaults reproduce the published protocol: 30 runs of all three
/// optimizers on all three benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<BenchmarkId>,
    pub algorithms: Vec<OptimizerId>,
    pub runs: u32,
    pub base_seed: u64,
    pub dimension: usize,
    /// Swarm settings and the environment clock. Its `seed` is ignored;
    /// every cell derives its own.
    pub optimizer: OptimizerConfig,
    pub nsga: Nsga2Config,
    pub output_dir: PathBuf,
    /// Concurrent cells; 0 lets the thread pool decide.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problems: BenchmarkId::ALL.to_vec(),
            algorithms: OptimizerId::ALL.to_vec(),
            runs: DEFAULT_RUNS,
            base_seed: DEFAULT_BASE_SEED,
            dimension: DEFAULT_DIMENSION,
            optimizer: OptimizerConfig::default(),
            nsga: Nsga2Config::default(),
            output_dir: PathBuf::from("results"),
            workers: 0,
        }
    }
}

fn parse_list<T, E: std::fmt::Display>(
    value: &str,
    parse: impl Fn(&str) -> Result<T, E>,
) -> Result<Vec<T>, HarnessError> {
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(|e| HarnessError::Config(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(HarnessError::Config(format!("empty list '{value}'")));
    }
    Ok(items)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Config(format!("invalid value '{value}' for '{key}'")))
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let value = value.trim();
        match key.trim() {
            "problems" | "problem" => self.problems = parse_list(value, str::parse::<BenchmarkId>)?,
            "algorithms" | "algorithm" => {
                self.algorithms = parse_list(value, str::parse::<OptimizerId>)?
            }
            "runs" => self.runs = parse_value(key, value)?,
            "seed" | "base_seed" => self.base_seed = parse_value(key, value)?,
            "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "workers" => self.workers = parse_value(key, value)?,
            "dimension" => self.dimension = parse_value(key, value)?,
            "iterations" | "max_iterations" => self.optimizer.max_iterations = parse_value(key, value)?,
            "severity" => self.optimizer.severity = parse_value(key, value)?,
            "frequency" => self.optimizer.frequency = parse_value(key, value)?,
            "swarm_size" => self.optimizer.swarm_size = parse_value(key, value)?,
            "archive_size" | "archive_capacity" => {
                self.optimizer.archive_capacity = parse_value(key, value)?
            }
            "mutation_probability" => {
                self.optimizer.mutation_probability = Some(parse_value(key, value)?)
            }
            "c_min" => self.optimizer.acceleration.0 = parse_value(key, value)?,
            "c_max" => self.optimizer.acceleration.1 = parse_value(key, value)?,
            "w_min" => self.optimizer.inertia.0 = parse_value(key, value)?,
            "w_max" => self.optimizer.inertia.1 = parse_value(key, value)?,
            "nsga_population" => self.nsga.population = parse_value(key, value)?,
            "nsga_evaluations" => self.nsga.evaluations = parse_value(key, value)?,
            "crossover_probability" => self.nsga.crossover_probability = parse_value(key, value)?,
            "crossover_index" => self.nsga.crossover_index = parse_value(key, value)?,
            "mutation_index" => self.nsga.mutation_index = parse_value(key, value)?,
            other => return Err(HarnessError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file on top of the defaults. `#` starts
    /// a comment.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut config = Self::default();
        config.apply(text)?;
        Ok(config)
    }

    pub fn apply(&mut self, text: &str) -> Result<(), HarnessError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(HarnessError::Config("no problems or algorithms selected".into()));
        }
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be positive".into()));
        }
        if self.dimension < 2 {
            return Err(HarnessError::Config("dimension must be at least 2".into()));
        }
        self.optimizer
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.optimizer.window_count() == 0 {
            return Err(HarnessError::Config(
                "iterations must cover at least one environment window".into(),
            ));
        }
        Ok(())
    }
}
