//! Dynamic multi-objective optimization: a particle swarm optimizer that
//! detects environment changes by re-evaluating its Pareto archive and
//! responds by re-initializing degraded particles, together with OMOPSO and
//! NSGA-II baselines, the FDA1/DIMP2/dMOP3 benchmarks, GD/Spread/HV
//! indicators and a reproducible experiment harness.

pub mod archive;
pub mod benchmarks;
pub mod dominance;
pub mod harness;
pub mod metrics;
pub mod optimizers;
pub mod problem;
pub mod seed;

pub use archive::{Archive, ArchiveEntry, CHANGE_TOLERANCE};
pub use benchmarks::{Benchmark, BenchmarkId, BenchmarkSpec};
pub use dominance::{crowding_distance, dominates, fast_non_dominated_sort, non_dominated_set};
pub use metrics::{gd, hypervolume, spread, MetricReport};
pub use optimizers::{OptimizerConfig, OptimizerId, RunTrace};
pub use problem::{compute_time, Bounds, DynamicProblem, TimeContext, TimeFrozen};
