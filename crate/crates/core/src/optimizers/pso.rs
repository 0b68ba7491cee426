use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IterationRecord, OptimizerConfig, OptimizerError, OptimizerId, RunTrace, WindowSnapshot};
use crate::archive::{Archive, ArchiveEntry};
use crate::dominance::{dominates, non_dominated_set};
use crate::problem::{time_of_window, Bounds, DynamicProblem, TimeContext};

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Objectives of `position` at the last evaluation.
    pub f: Vec<f64>,
    pub pbest_x: Vec<f64>,
    pub pbest_f: Vec<f64>,
}

impl Particle {
    /// A particle at rest whose personal best is its own position.
    pub fn at_rest(position: Vec<f64>, f: Vec<f64>) -> Self {
        Self {
            velocity: vec![0.0; position.len()],
            pbest_x: position.clone(),
            pbest_f: f.clone(),
            position,
            f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Coefficients {
    pub fn draw<R: Rng + ?Sized>(config: &OptimizerConfig, rng: &mut R) -> Self {
        let w = uniform(rng, config.inertia);
        let c1 = uniform(rng, config.acceleration);
        let c2 = uniform(rng, config.acceleration);
        Self { w, c1, c2 }
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Half the width of each dimension.
pub fn velocity_limits(bounds: &Bounds) -> Vec<f64> {
    (0..bounds.dimension()).map(|i| 0.5 * bounds.width(i)).collect()
}

/// `w v + c1 r1 (pbest - x) + c2 r2 (leader - x)`, clamped to `[-vmax, vmax]`.
pub fn update_velocity(
    particle: &Particle,
    leader: &[f64],
    coefficients: Coefficients,
    r1: f64,
    r2: f64,
    vmax: &[f64],
) -> Vec<f64> {
    let Coefficients { w, c1, c2 } = coefficients;
    particle
        .velocity
        .iter()
        .zip(&particle.position)
        .zip(particle.pbest_x.iter().zip(leader))
        .zip(vmax)
        .map(|(((&v, &x), (&pbest, &lead)), &limit)| {
            let next = w * v + c1 * r1 * (pbest - x) + c2 * r2 * (lead - x);
            next.clamp(-limit, limit)
        })
        .collect()
}

/// Moves the particle by its velocity. Components that leave the box are
/// put on the violated bound and their velocity is zeroed.
pub fn update_position(particle: &mut Particle, bounds: &Bounds) {
    for i in 0..particle.position.len() {
        let moved = particle.position[i] + particle.velocity[i];
        let clamped = bounds.clamp(i, moved);
        if clamped != moved {
            particle.velocity[i] = 0.0;
        }
        particle.position[i] = clamped;
    }
}

/// Resamples each component uniformly within its bounds with probability
/// `probability`.
pub fn mutate<R: Rng + ?Sized>(x: &mut [f64], probability: f64, rng: &mut R, bounds: &Bounds) {
    for (i, xi) in x.iter_mut().enumerate() {
        if rng.random::<f64>() < probability {
            *xi = uniform(rng, (bounds.lower()[i], bounds.upper()[i]));
        }
    }
}

/// Dominating evaluations replace the personal best, dominated ones are
/// ignored, incomparable ones replace it with probability one half.
/// Returns whether the personal best changed.
pub fn update_pbest<R: Rng + ?Sized>(particle: &mut Particle, f_new: &[f64], rng: &mut R) -> bool {
    let replace = if dominates(f_new, &particle.pbest_f) {
        true
    } else if dominates(&particle.pbest_f, f_new) {
        false
    } else {
        rng.random_bool(0.5)
    };
    if replace {
        particle.pbest_x.clone_from(&particle.position);
        particle.pbest_f = f_new.to_vec();
    }
    replace
}

/// Binary tournament on crowding distance. `crowding` must be the archive's
/// current crowding vector. Returns the winning entry index.
pub fn select_leader<R: Rng + ?Sized>(
    archive: &Archive,
    crowding: &[f64],
    rng: &mut R,
) -> Result<usize, OptimizerError> {
    let n = archive.len();
    if n == 0 {
        return Err(OptimizerError::EmptyArchive);
    }
    debug_assert_eq!(crowding.len(), n);
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    Ok(if crowding[a] > crowding[b] {
        a
    } else if crowding[b] > crowding[a] {
        b
    } else if rng.random_bool(0.5) {
        a
    } else {
        b
    })
}

pub struct SwarmState {
    pub particles: Vec<Particle>,
    pub archive: Archive,
    pub ctx: TimeContext,
    pub rng: ChaCha8Rng,
}

/// Uniform random swarm at iteration 0 with the archive seeded from its
/// non-dominated members.
pub fn initialize_swarm<P: DynamicProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
) -> Result<SwarmState, OptimizerError> {
    config.validate()?;
    let ctx = TimeContext::new(config.severity, config.frequency, 0)?;
    let t = ctx.time();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bounds = problem.bounds();

    let particles: Vec<Particle> = (0..config.swarm_size)
        .map(|_| {
            let x = random_position(bounds, &mut rng);
            let f = problem.evaluate_unchecked(&x, t);
            Particle::at_rest(x, f)
        })
        .collect();

    let mut archive = Archive::new(config.archive_capacity);
    let fs: Vec<&[f64]> = particles.iter().map(|p| p.f.as_slice()).collect();
    for i in non_dominated_set(&fs) {
        let p = &particles[i];
        archive.insert(ArchiveEntry::new(p.position.clone(), p.f.clone(), t));
    }

    Ok(SwarmState {
        particles,
        archive,
        ctx,
        rng,
    })
}

fn random_position<R: Rng + ?Sized>(bounds: &Bounds, rng: &mut R) -> Vec<f64> {
    (0..bounds.dimension())
        .map(|i| uniform(rng, (bounds.lower()[i], bounds.upper()[i])))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChangeReport {
    pub changed: bool,
    /// Archive entries whose re-evaluated objectives are dominated by the
    /// stored ones.
    pub degraded: usize,
}

/// Re-evaluates the archive at the state's current time. The archive is
/// pruned of entries that became dominated.
pub fn detect_change<P: DynamicProblem + ?Sized>(state: &mut SwarmState, problem: &P) -> ChangeReport {
    let summary = state.archive.reevaluate(problem, state.ctx.time());
    ChangeReport {
        changed: summary.changed > 0,
        degraded: summary.degraded,
    }
}

/// Re-initializes every particle whose objectives at the new time are
/// dominated by the ones it recorded before, and refreshes the personal
/// bests of the rest. Returns the number of re-initialized particles.
pub fn respond_change<P: DynamicProblem + ?Sized>(state: &mut SwarmState, problem: &P) -> usize {
    let t = state.ctx.time();
    let bounds = problem.bounds();
    let mut reinitialized = 0;
    for particle in &mut state.particles {
        let fresh = problem.evaluate_unchecked(&particle.position, t);
        if dominates(&particle.f, &fresh) {
            let x = random_position(bounds, &mut state.rng);
            let f = problem.evaluate_unchecked(&x, t);
            *particle = Particle::at_rest(x, f);
            reinitialized += 1;
        } else {
            particle.f = fresh;
            particle.pbest_f = problem.evaluate_unchecked(&particle.pbest_x, t);
        }
    }
    reinitialized
}

/// Dynamic MOPSO: the common swarm loop with change detection at every
/// window boundary and re-initialization when a change is found.
pub fn run_dynamic_mopso<P: DynamicProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
) -> Result<RunTrace, OptimizerError> {
    run_swarm(problem, config, true)
}

/// The same loop with detection and response disabled; archive entries
/// keep the objectives they were inserted with.
pub fn run_omopso<P: DynamicProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
) -> Result<RunTrace, OptimizerError> {
    run_swarm(problem, config, false)
}

fn run_swarm<P: DynamicProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    react_to_change: bool,
) -> Result<RunTrace, OptimizerError> {
    let mut state = initialize_swarm(problem, config)?;
    let bounds = problem.bounds().clone();
    let vmax = velocity_limits(&bounds);
    let mutation_probability = config.mutation_probability_for(bounds.dimension());

    let mut records = vec![IterationRecord {
        iteration: 0,
        t: state.ctx.time(),
        change_detected: false,
        degraded: 0,
        reinitialized: 0,
    }];
    let mut windows = Vec::with_capacity(config.window_count() as usize);
    let mut detector_calls = 0;

    for tau in 1..=config.max_iterations {
        state.ctx = state.ctx.at(tau);
        let t = state.ctx.time();
        let mut record = IterationRecord {
            iteration: tau,
            t,
            change_detected: false,
            degraded: 0,
            reinitialized: 0,
        };

        if state.ctx.is_boundary() {
            let ended = state.ctx.window() - 1;
            windows.push(WindowSnapshot::capture(
                problem,
                ended,
                time_of_window(ended, config.severity),
                state.archive.entries().to_vec(),
            ));
            if react_to_change {
                detector_calls += 1;
                let report = detect_change(&mut state, problem);
                record.change_detected = report.changed;
                record.degraded = report.degraded;
                if report.changed {
                    record.reinitialized = respond_change(&mut state, problem);
                }
            }
        }

        let coefficients = Coefficients::draw(config, &mut state.rng);
        let mut crowding = state.archive.crowding();
        for i in 0..state.particles.len() {
            let leader = select_leader(&state.archive, &crowding, &mut state.rng)?;
            let r1 = state.rng.random::<f64>();
            let r2 = state.rng.random::<f64>();

            let particle = &mut state.particles[i];
            particle.velocity = update_velocity(
                particle,
                &state.archive.entries()[leader].x,
                coefficients,
                r1,
                r2,
                &vmax,
            );
            update_position(particle, &bounds);
            mutate(&mut particle.position, mutation_probability, &mut state.rng, &bounds);
            debug_assert!(bounds.contains(&particle.position));

            particle.f = problem.evaluate_unchecked(&particle.position, t);
            let f = particle.f.clone();
            update_pbest(particle, &f, &mut state.rng);

            let entry = ArchiveEntry::new(particle.position.clone(), f, t);
            if state.archive.insert(entry).accepted() {
                crowding = state.archive.crowding();
            }
        }
        records.push(record);
    }

    Ok(RunTrace {
        algorithm: if react_to_change {
            OptimizerId::DynamicMopso
        } else {
            OptimizerId::Omopso
        },
        problem: problem.name().to_string(),
        seed: config.seed,
        records,
        windows,
        detector_calls,
        final_time: state.ctx.time(),
        final_archive: state.archive,
    })
}
