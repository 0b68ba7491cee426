use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IterationRecord, OptimizerConfig, OptimizerError, OptimizerId, RunTrace, WindowSnapshot};
use crate::archive::{Archive, ArchiveEntry};
use crate::dominance::{crowding_distance, fast_non_dominated_sort};
use crate::problem::{time_of_window, Bounds, DynamicProblem, TimeContext};

#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Config {
    pub population: usize,
    /// Total evaluation budget, initial population included.
    pub evaluations: usize,
    pub crossover_probability: f64,
    /// SBX distribution index.
    pub crossover_index: f64,
    /// Polynomial mutation distribution index.
    pub mutation_index: f64,
    /// Per-gene probability; `None` means `1 / dimension`.
    pub mutation_probability: Option<f64>,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Self {
            population: 100,
            evaluations: 25_000,
            crossover_probability: 0.9,
            crossover_index: 20.0,
            mutation_index: 20.0,
            mutation_probability: None,
        }
    }
}

impl Nsga2Config {
    pub fn generations(&self) -> usize {
        self.evaluations / self.population
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |msg: &str| Err(OptimizerError::InvalidConfig(msg.to_string()));
        if self.population < 2 || self.population % 2 != 0 {
            return bad("population must be an even number >= 2");
        }
        if self.evaluations < self.population {
            return bad("evaluation budget smaller than one population");
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return bad("crossover probability must lie in [0, 1]");
        }
        if let Some(p) = self.mutation_probability {
            if !(0.0..=1.0).contains(&p) {
                return bad("mutation probability must lie in [0, 1]");
            }
        }
        if !(self.crossover_index >= 0.0 && self.mutation_index >= 0.0) {
            return bad("distribution indices must be non-negative");
        }
        Ok(())
    }
}

/// SBX spread factor for a uniform draw `u` in `[0, 1)`.
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// Children of `p1`, `p2` for spread factor `beta`. `beta = 1` reproduces
/// the parents.
pub fn sbx_children(p1: f64, p2: f64, beta: f64) -> (f64, f64) {
    (
        0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2),
        0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2),
    )
}

/// Polynomial mutation perturbation in units of the variable range.
/// `u = 0.5` gives zero.
pub fn polynomial_delta(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u < 0.5 {
        (2.0 * u).powf(exponent) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u)).powf(exponent)
    }
}

pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    probability: f64,
    eta: f64,
    bounds: &Bounds,
    rng: &mut R,
) {
    for (i, xi) in x.iter_mut().enumerate() {
        if rng.random::<f64>() < probability {
            let delta = polynomial_delta(rng.random::<f64>(), eta);
            *xi = bounds.clamp(i, *xi + delta * bounds.width(i));
        }
    }
}

fn sbx_crossover<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    eta: f64,
    bounds: &Bounds,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for i in 0..a.len() {
        if rng.random_bool(0.5) && (a[i] - b[i]).abs() > 1e-14 {
            let beta = sbx_beta(rng.random::<f64>(), eta);
            let (y1, y2) = sbx_children(a[i], b[i], beta);
            c1[i] = bounds.clamp(i, y1);
            c2[i] = bounds.clamp(i, y2);
        }
    }
    (c1, c2)
}

#[derive(Debug, Clone)]
struct Individual {
    x: Vec<f64>,
    f: Vec<f64>,
    eval_time: f64,
    rank: usize,
    crowding: f64,
}

/// Sorts `pool` into fronts, assigns rank and crowding, and keeps the best
/// `size` by (rank, crowding).
fn survive(mut pool: Vec<Individual>, size: usize) -> Vec<Individual> {
    let fs: Vec<&[f64]> = pool.iter().map(|ind| ind.f.as_slice()).collect();
    let fronts = fast_non_dominated_sort(&fs);
    for (rank, front) in fronts.iter().enumerate() {
        let front_fs: Vec<&[f64]> = front.iter().map(|&i| pool[i].f.as_slice()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&front_fs)) {
            pool[i].rank = rank;
            pool[i].crowding = d;
        }
    }

    let mut next = Vec::with_capacity(size);
    for front in fronts {
        if next.len() + front.len() <= size {
            next.extend(front.iter().map(|&i| pool[i].clone()));
        } else {
            let mut last: Vec<usize> = front;
            last.sort_by(|&a, &b| {
                pool[b]
                    .crowding
                    .partial_cmp(&pool[a].crowding)
                    .unwrap_or(Ordering::Equal)
            });
            let room = size - next.len();
            next.extend(last[..room].iter().map(|&i| pool[i].clone()));
        }
        if next.len() == size {
            break;
        }
    }
    next
}

fn tournament<'a, R: Rng + ?Sized>(population: &'a [Individual], rng: &mut R) -> &'a Individual {
    let a = &population[rng.random_range(0..population.len())];
    let b = &population[rng.random_range(0..population.len())];
    match a.rank.cmp(&b.rank) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if a.crowding > b.crowding {
                a
            } else if b.crowding > a.crowding {
                b
            } else if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

fn first_front(population: &[Individual]) -> Vec<ArchiveEntry> {
    population
        .iter()
        .filter(|ind| ind.rank == 0)
        .map(|ind| ArchiveEntry::new(ind.x.clone(), ind.f.clone(), ind.eval_time))
        .collect()
}

/// Generational NSGA-II on the shared environment clock.
///
/// The evaluation budget is split into `evaluations / population`
/// generations (the first one being the random initial population), and
/// generation `g` runs at the iteration `g * max_iterations / (G - 1)` of
/// the swarm clock, so every optimizer crosses the same environment windows.
/// Stored objectives are never refreshed after a change.
pub fn run_nsga2<P: DynamicProblem + ?Sized>(
    problem: &P,
    config: &OptimizerConfig,
    nsga: &Nsga2Config,
) -> Result<RunTrace, OptimizerError> {
    config.validate()?;
    nsga.validate()?;
    let bounds = problem.bounds().clone();
    let mutation_probability = nsga
        .mutation_probability
        .unwrap_or(1.0 / bounds.dimension() as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let clock = TimeContext::new(config.severity, config.frequency, 0)?;

    let generations = nsga.generations() as u64;
    let iteration_of = |g: u64| -> u64 {
        if generations <= 1 {
            0
        } else {
            g * config.max_iterations / (generations - 1)
        }
    };

    let t0 = clock.time();
    let initial: Vec<Individual> = (0..nsga.population)
        .map(|_| {
            let x: Vec<f64> = (0..bounds.dimension())
                .map(|i| bounds.lower()[i] + bounds.width(i) * rng.random::<f64>())
                .collect();
            let f = problem.evaluate_unchecked(&x, t0);
            Individual {
                x,
                f,
                eval_time: t0,
                rank: 0,
                crowding: 0.0,
            }
        })
        .collect();
    let mut population = survive(initial, nsga.population);

    let mut records = vec![IterationRecord {
        iteration: 0,
        t: t0,
        change_detected: false,
        degraded: 0,
        reinitialized: 0,
    }];
    let mut windows = Vec::with_capacity(config.window_count() as usize);
    let mut ctx = clock;

    for g in 1..generations {
        let previous_window = ctx.window();
        ctx = clock.at(iteration_of(g));
        for ended in previous_window..ctx.window() {
            windows.push(WindowSnapshot::capture(
                problem,
                ended,
                time_of_window(ended, config.severity),
                first_front(&population),
            ));
        }
        let t = ctx.time();

        let mut offspring = Vec::with_capacity(nsga.population);
        while offspring.len() < nsga.population {
            let a = tournament(&population, &mut rng);
            let b = tournament(&population, &mut rng);
            let (mut c1, mut c2) = if rng.random::<f64>() < nsga.crossover_probability {
                sbx_crossover(&a.x, &b.x, nsga.crossover_index, &bounds, &mut rng)
            } else {
                (a.x.clone(), b.x.clone())
            };
            polynomial_mutation(&mut c1, mutation_probability, nsga.mutation_index, &bounds, &mut rng);
            polynomial_mutation(&mut c2, mutation_probability, nsga.mutation_index, &bounds, &mut rng);
            for x in [c1, c2] {
                if offspring.len() < nsga.population {
                    let f = problem.evaluate_unchecked(&x, t);
                    offspring.push(Individual {
                        x,
                        f,
                        eval_time: t,
                        rank: 0,
                        crowding: 0.0,
                    });
                }
            }
        }

        population.extend(offspring);
        population = survive(population, nsga.population);
        records.push(IterationRecord {
            iteration: ctx.iteration(),
            t,
            change_detected: false,
            degraded: 0,
            reinitialized: 0,
        });
    }

    let front = first_front(&population);
    let mut final_archive = Archive::new(front.len().max(1));
    for entry in front {
        final_archive.insert(entry);
    }

    Ok(RunTrace {
        algorithm: OptimizerId::Nsga2,
        problem: problem.name().to_string(),
        seed: config.seed,
        records,
        windows,
        detector_calls: 0,
        final_time: ctx.time(),
        final_archive,
    })
}
