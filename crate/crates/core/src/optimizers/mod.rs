//! Optimizers sharing a common trace format: the dynamic MOPSO with
//! archive-based change detection and re-initialization response, an
//! OMOPSO baseline that runs the same loop with both strategies switched
//! off, and a generational NSGA-II baseline.

mod nsga2;
mod pso;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::archive::{Archive, ArchiveEntry};
use crate::problem::{DynamicProblem, ProblemError};

pub use nsga2::{
    polynomial_delta, polynomial_mutation, run_nsga2, sbx_beta, sbx_children, Nsga2Config,
};
pub use pso::{
    detect_change, initialize_swarm, mutate, respond_change, run_dynamic_mopso, run_omopso,
    select_leader, update_pbest, update_position, update_velocity, velocity_limits,
    ChangeReport, Coefficients, Particle, SwarmState,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("archive is empty; seed it before selecting leaders")]
    EmptyArchive,
    #[error("unknown optimizer '{0}' (expected dynamic-mopso, omopso or nsga2)")]
    UnknownOptimizer(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OptimizerId {
    DynamicMopso,
    Omopso,
    Nsga2,
}

impl OptimizerId {
    pub const ALL: [OptimizerId; 3] = [OptimizerId::DynamicMopso, OptimizerId::Omopso, OptimizerId::Nsga2];

    pub fn as_str(self) -> &'static str {
        match self {
            OptimizerId::DynamicMopso => "dynamic-mopso",
            OptimizerId::Omopso => "omopso",
            OptimizerId::Nsga2 => "nsga2",
        }
    }
}

impl fmt::Display for OptimizerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimizerId {
    type Err = OptimizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dynamic-mopso" | "dmopso" => Ok(OptimizerId::DynamicMopso),
            "omopso" => Ok(OptimizerId::Omopso),
            "nsga2" | "nsga-ii" => Ok(OptimizerId::Nsga2),
            _ => Err(OptimizerError::UnknownOptimizer(s.to_string())),
        }
    }
}

/// Swarm settings plus the environment clock shared by every optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub swarm_size: usize,
    pub archive_capacity: usize,
    pub max_iterations: u64,
    /// Per-component mutation probability; `None` means `1 / dimension`.
    pub mutation_probability: Option<f64>,
    /// Acceleration coefficients `c1`, `c2` are drawn from this range.
    pub acceleration: (f64, f64),
    /// Inertia weight `w` is drawn from this range.
    pub inertia: (f64, f64),
    pub severity: u32,
    pub frequency: u32,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            swarm_size: 200,
            archive_capacity: 100,
            max_iterations: 200,
            mutation_probability: None,
            acceleration: (1.5, 2.0),
            inertia: (0.1, 0.5),
            severity: 10,
            frequency: 10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |msg: &str| Err(OptimizerError::InvalidConfig(msg.to_string()));
        if self.swarm_size == 0 {
            return bad("swarm_size must be positive");
        }
        if self.archive_capacity == 0 {
            return bad("archive_capacity must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        if self.severity == 0 || self.frequency == 0 {
            return bad("severity and frequency must be positive");
        }
        if let Some(p) = self.mutation_probability {
            if !(0.0..=1.0).contains(&p) {
                return bad("mutation_probability must lie in [0, 1]");
            }
        }
        for (name, (lo, hi)) in [("acceleration", self.acceleration), ("inertia", self.inertia)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(OptimizerError::InvalidConfig(format!(
                    "{name} range [{lo}, {hi}] is not well ordered"
                )));
            }
        }
        Ok(())
    }

    pub fn mutation_probability_for(&self, dimension: usize) -> f64 {
        self.mutation_probability.unwrap_or(1.0 / dimension as f64)
    }

    /// Number of complete environment windows in a run.
    pub fn window_count(&self) -> u64 {
        self.max_iterations / u64::from(self.frequency)
    }
}

/// Approximation set at the end of one environment window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSnapshot {
    pub window: u64,
    /// Time in force during the window.
    pub t: f64,
    /// Entries as stored by the optimizer, possibly with stale objectives.
    pub entries: Vec<ArchiveEntry>,
    /// Objectives of `entries` evaluated at `t`. Metrics use these.
    pub objectives: Vec<Vec<f64>>,
}

impl WindowSnapshot {
    pub fn capture<P: DynamicProblem + ?Sized>(
        problem: &P,
        window: u64,
        t: f64,
        entries: Vec<ArchiveEntry>,
    ) -> Self {
        let objectives = entries
            .iter()
            .map(|e| problem.evaluate_unchecked(&e.x, t))
            .collect();
        Self {
            window,
            t,
            entries,
            objectives,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: u64,
    pub t: f64,
    pub change_detected: bool,
    /// Archive entries whose objectives got worse at the change.
    pub degraded: usize,
    /// Particles re-initialized by the response.
    pub reinitialized: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub algorithm: OptimizerId,
    pub problem: String,
    pub seed: u64,
    pub records: Vec<IterationRecord>,
    pub windows: Vec<WindowSnapshot>,
    /// How many times the change detector ran.
    pub detector_calls: usize,
    pub final_archive: Archive,
    pub final_time: f64,
}

impl RunTrace {
    pub fn final_window(&self) -> Option<&WindowSnapshot> {
        self.windows.last()
    }

    pub fn changes_detected(&self) -> usize {
        self.records.iter().filter(|r| r.change_detected).count()
    }
}

/// Runs `algorithm` with Table-style defaults for NSGA-II.
pub fn run<P: DynamicProblem + ?Sized>(
    algorithm: OptimizerId,
    problem: &P,
    config: &OptimizerConfig,
) -> Result<RunTrace, OptimizerError> {
    match algorithm {
        OptimizerId::DynamicMopso => run_dynamic_mopso(problem, config),
        OptimizerId::Omopso => run_omopso(problem, config),
        OptimizerId::Nsga2 => run_nsga2(problem, config, &Nsga2Config::default()),
    }
}
