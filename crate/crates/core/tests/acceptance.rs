//! Acceptance suite. Prints one PASS/FAIL line per criterion. Exits
//! non-zero on any failure only when `DYNMO_ACCEPTANCE_STRICT=1`.

use std::process::ExitCode;

use dynmo_core::archive::{Archive, ArchiveEntry, CHANGE_TOLERANCE};
use dynmo_core::benchmarks::{fda1_g_target, Benchmark, BenchmarkId, BenchmarkSpec};
use dynmo_core::dominance::{dominates, non_dominated_set};
use dynmo_core::harness::{execute_cell, run_cell, Cell, ExperimentConfig};
use dynmo_core::metrics::{gd, hypervolume, spread, MetricReport};
use dynmo_core::optimizers::{run_dynamic_mopso, OptimizerConfig, OptimizerId, RunTrace};
use dynmo_core::problem::{DynamicProblem, TimeFrozen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: u32 = 30;
const METRIC_TOLERANCE: f64 = 1e-9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Thirty seeded runs of one algorithm on one benchmark with default
/// settings, as the harness would execute them.
fn runs(problem: BenchmarkId, algorithm: OptimizerId) -> Vec<(RunTrace, MetricReport)> {
    let config = ExperimentConfig::default();
    (0..SEEDS)
        .map(|run| {
            execute_cell(
                &config,
                Cell {
                    problem,
                    algorithm,
                    run,
                },
            )
            .expect("cell runs")
        })
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

struct Fixture {
    fda1_dynamic: Vec<(RunTrace, MetricReport)>,
    fda1_omopso: Vec<(RunTrace, MetricReport)>,
    dmop3_dynamic: Vec<(RunTrace, MetricReport)>,
    dmop3_omopso: Vec<(RunTrace, MetricReport)>,
}

fn directional(f: &Fixture) -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, dynamic, omopso) in [
        ("fda1", &f.fda1_dynamic, &f.fda1_omopso),
        ("dmop3", &f.dmop3_dynamic, &f.dmop3_omopso),
    ] {
        let d_gd = mean(dynamic.iter().map(|(_, r)| r.mean_gd()));
        let o_gd = mean(omopso.iter().map(|(_, r)| r.mean_gd()));
        let d_sp = mean(dynamic.iter().map(|(_, r)| r.mean_spread()));
        let o_sp = mean(omopso.iter().map(|(_, r)| r.mean_spread()));
        let d_hv = mean(dynamic.iter().map(|(_, r)| r.mean_hv()));
        let o_hv = mean(omopso.iter().map(|(_, r)| r.mean_hv()));
        let hv_wins = dynamic
            .iter()
            .zip(omopso)
            .filter(|((_, d), (_, o))| d.mean_hv() > o.mean_hv())
            .count();
        let sign_ok = hv_wins as f64 >= 0.8 * SEEDS as f64;
        ok &= d_gd < o_gd && d_sp < o_sp && d_hv > o_hv && sign_ok;
        lines.push(format!(
            "{name}: gd {d_gd:.4e}<{o_gd:.4e} spread {d_sp:.4e}<{o_sp:.4e} hv {d_hv:.4}>{o_hv:.4} hv-wins {hv_wins}/{SEEDS}"
        ));
    }
    outcome(ok, lines.join("; "))
}

fn staleness(f: &Fixture) -> Outcome {
    let problem = BenchmarkSpec::new(BenchmarkId::Fda1).build(10, 0).unwrap();
    let stale = |trace: &RunTrace| trace.final_archive.count_stale(&problem, trace.final_time);
    // change tolerance shared with the detector
    assert_eq!(CHANGE_TOLERANCE, 1e-12);
    let clean_omopso: Vec<usize> = f
        .fda1_omopso
        .iter()
        .enumerate()
        .filter(|(_, (t, _))| stale(t) == 0)
        .map(|(run, _)| run)
        .collect();
    let dynamic_max = f.fda1_dynamic.iter().map(|(t, _)| stale(t)).max().unwrap();
    outcome(
        clean_omopso.is_empty() && dynamic_max == 0,
        format!(
            "omopso runs with >= 1 stale entry {}/{SEEDS} (runs without: {clean_omopso:?}); dynamic-mopso max stale {dynamic_max} (need 0)",
            SEEDS as usize - clean_omopso.len()
        ),
    )
}

fn detection(f: &Fixture) -> Outcome {
    let config = OptimizerConfig::default();
    assert_eq!((config.severity, config.frequency, config.max_iterations), (10, 10, 200));

    let mut ok = true;
    let mut missed = 0;
    for (trace, _) in &f.fda1_dynamic {
        ok &= trace.detector_calls == 20;
        for r in trace.records.iter().filter(|r| r.iteration > 0 && r.iteration % 10 == 0) {
            let previous = (r.iteration / 10 - 1) as f64 / 10.0;
            let moved = fda1_g_target(previous) != fda1_g_target(r.t);
            if moved != r.change_detected {
                missed += 1;
            }
        }
        // nothing flagged off-boundary
        ok &= trace
            .records
            .iter()
            .all(|r| !r.change_detected || r.iteration % 10 == 0);
    }

    let mut false_positives = 0;
    let mut frozen_calls_ok = true;
    for seed in 0..u64::from(SEEDS) {
        let frozen = TimeFrozen::new(BenchmarkSpec::new(BenchmarkId::Fda1).build(10, 0).unwrap(), 0.0);
        let trace = run_dynamic_mopso(&frozen, &OptimizerConfig::with_seed(seed)).unwrap();
        false_positives += trace.changes_detected();
        frozen_calls_ok &= trace.detector_calls == 20;
    }
    ok &= missed == 0 && false_positives == 0 && frozen_calls_ok;
    outcome(
        ok,
        format!("20 calls per run; mismatched boundaries {missed}; false positives on frozen FDA1 {false_positives}"),
    )
}

fn convergence(f: &Fixture) -> Outcome {
    let finals: Vec<f64> = f
        .fda1_dynamic
        .iter()
        .map(|(_, r)| r.last().unwrap().gd)
        .collect();
    let med = median(finals);
    let worst_fraction = f
        .fda1_dynamic
        .iter()
        .map(|(trace, _)| {
            let last = trace.final_window().unwrap();
            let feasible = last
                .objectives
                .iter()
                .filter(|p| p[1] >= 1.0 - p[0].sqrt() - 1e-9)
                .count();
            feasible as f64 / last.objectives.len() as f64
        })
        .fold(1.0, f64::min);
    outcome(
        med < 0.1 && worst_fraction >= 0.9,
        format!("median final-window GD {med:.4e} (< 0.1); min feasible-side fraction {worst_fraction:.3} (>= 0.9)"),
    )
}

/// Fraction of uniform samples in `[0, reference]` dominated by the front.
fn monte_carlo_hv(front: &[Vec<f64>], reference: [f64; 2], samples: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let area = reference[0] * reference[1];
    let mut hits = 0usize;
    for _ in 0..samples {
        let s = [rng.random::<f64>() * reference[0], rng.random::<f64>() * reference[1]];
        if front.iter().any(|p| p[0] <= s[0] && p[1] <= s[1]) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (area * p, area * (p * (1.0 - p) / samples as f64).sqrt())
}

fn metric_oracles() -> Outcome {
    let close = |a: f64, b: f64| (a - b).abs() <= METRIC_TOLERANCE;
    let origin = [vec![0.0, 0.0]];
    let mut ok = true;
    ok &= close(gd(&[vec![0.0, 0.0]], &origin).unwrap(), 0.0);
    ok &= close(gd(&[vec![0.3, 0.0]], &origin).unwrap(), 0.3);
    ok &= close(gd(&[vec![3.0, 0.0], vec![0.0, 4.0]], &origin).unwrap(), 12.5f64.sqrt());
    let uniform: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 0.0]).collect();
    ok &= close(spread(&uniform).unwrap(), 0.0);
    ok &= close(spread(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![3.0, 0.0]]).unwrap(), 0.5);
    ok &= close(spread(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(), 0.0);
    ok &= close(hypervolume(&[vec![0.5, 0.5]], &[1.0, 1.0]).unwrap(), 0.25);
    ok &= close(hypervolume(&[vec![0.2, 0.8], vec![0.8, 0.2]], &[1.0, 1.0]).unwrap(), 0.28);
    ok &= close(
        hypervolume(&[vec![0.2, 0.8], vec![0.8, 0.2], vec![0.9, 0.9]], &[1.0, 1.0]).unwrap(),
        0.28,
    );
    let examples_ok = ok;

    let mut rng = ChaCha8Rng::seed_from_u64(20_170_101);
    let reference = [1.1, 1.1];
    let mut worst_z: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(1..=20);
        let front: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let exact = hypervolume(&front, &reference).unwrap();
        let (estimate, se) = monte_carlo_hv(&front, reference, 1_000_000, &mut rng);
        worst_z = worst_z.max((exact - estimate).abs() / se);
    }
    outcome(
        examples_ok && worst_z <= 3.0,
        format!("hand examples within 1e-9: {examples_ok}; worst |HV - MC| over 50 fronts = {worst_z:.2} SE (<= 3)"),
    )
}

fn dominance_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(0..=64);
        // integer grid to force ties and duplicates
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![f64::from(rng.random_range(0..10u8)), f64::from(rng.random_range(0..10u8))])
            .collect();
        let brute: Vec<usize> = (0..n)
            .filter(|&i| {
                !(0..n).any(|j| {
                    points[j].iter().zip(&points[i]).all(|(a, b)| a <= b)
                        && points[j].iter().zip(&points[i]).any(|(a, b)| a < b)
                })
            })
            .collect();
        if non_dominated_set(&points) != brute {
            mismatches += 1;
        }
    }

    let mut archive = Archive::new(100);
    let mut violations = 0;
    for k in 0..100_000 {
        let f = vec![rng.random::<f64>(), rng.random::<f64>()];
        archive.insert(ArchiveEntry::new(f.clone(), f, 0.0));
        if archive.len() > 100 {
            violations += 1;
        }
        // full pairwise check is quadratic; sample it
        if k % 1000 == 999 {
            let fs = archive.pof_image();
            if fs.iter().any(|a| fs.iter().any(|b| dominates(a, b))) {
                violations += 1;
            }
        }
    }
    let fs = archive.pof_image();
    if fs.iter().any(|a| fs.iter().any(|b| dominates(a, b))) {
        violations += 1;
    }
    outcome(
        mismatches == 0 && violations == 0,
        format!("brute-force mismatches {mismatches}/1000; archive invariant violations {violations} over 1e5 inserts"),
    )
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut checked = 0;
    for algorithm in OptimizerId::ALL {
        let cell = Cell {
            problem: BenchmarkId::Dmop3,
            algorithm,
            run: 3,
        };
        for dir in [&a, &b] {
            let config = ExperimentConfig {
                output_dir: dir.path().to_path_buf(),
                ..ExperimentConfig::default()
            };
            run_cell(&config, cell).unwrap();
        }
        for path in [cell.report_path(a.path()), cell.trace_path(a.path()), cell.front_path(a.path())] {
            let twin = b.path().join(path.strip_prefix(a.path()).unwrap());
            ok &= std::fs::read(&path).unwrap() == std::fs::read(&twin).unwrap();
            checked += 1;
        }
    }
    outcome(ok, format!("{checked} artifacts compared byte for byte"))
}

/// Minimizes `g` over every variable except the position variable by
/// coordinate descent: a dense grid over each coordinate's full range
/// followed by golden-section refinement around the best grid point.
fn minimize_distance_term(problem: &Benchmark, t: f64, rng: &mut ChaCha8Rng) -> f64 {
    let bounds = problem.bounds().clone();
    let skip = problem.position_variable(t);
    let mut x: Vec<f64> = (0..bounds.dimension())
        .map(|i| rng.random_range(bounds.lower()[i]..=bounds.upper()[i]))
        .collect();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for _sweep in 0..3 {
        for i in (0..x.len()).filter(|&i| i != skip) {
            let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
            let eval = |v: f64| {
                let mut y = x.clone();
                y[i] = v;
                problem.distance_term(&y, t)
            };
            let steps = 4000;
            let h = (hi - lo) / steps as f64;
            let best = (0..=steps)
                .map(|k| lo + h * k as f64)
                .min_by(|a, b| eval(*a).total_cmp(&eval(*b)))
                .unwrap();
            let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
            for _ in 0..100 {
                let c = b - golden * (b - a);
                let d = a + golden * (b - a);
                if eval(c) < eval(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            x[i] = 0.5 * (a + b);
        }
    }
    problem.distance_term(&x, t)
}

fn benchmark_minima() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for id in BenchmarkId::ALL {
        let problem = BenchmarkSpec::new(id).build(10, 11).unwrap();
        for t in [0.0, 0.1, 0.5, 1.0] {
            let g = minimize_distance_term(&problem, t, &mut rng);
            worst = worst.max((g - 1.0).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |min g - 1| over 3 problems x 4 times = {worst:.2e} (<= 1e-6)"))
}

fn main() -> ExitCode {
    let fixture = Fixture {
        fda1_dynamic: runs(BenchmarkId::Fda1, OptimizerId::DynamicMopso),
        fda1_omopso: runs(BenchmarkId::Fda1, OptimizerId::Omopso),
        dmop3_dynamic: runs(BenchmarkId::Dmop3, OptimizerId::DynamicMopso),
        dmop3_omopso: runs(BenchmarkId::Dmop3, OptimizerId::Omopso),
    };

    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 directional comparison vs OMOPSO (fda1, dmop3)", directional(&fixture)),
        ("2 archive staleness negative control", staleness(&fixture)),
        ("3 change-detection exactness", detection(&fixture)),
        ("4 convergence smoke test on fda1", convergence(&fixture)),
        ("5 metric oracles", metric_oracles()),
        ("6 dominance and archive properties", dominance_suite()),
        ("7 determinism of cell artifacts", determinism()),
        ("8 benchmark minima g = 1", benchmark_minima()),
    ];

    let mut failed = 0;
    for (name, result) in &criteria {
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    let strict = std::env::var("DYNMO_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
